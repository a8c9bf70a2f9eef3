// Copyright 2026 The DRAB Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Discrete members of the covariance and steering-vector ambiguity sets, and
// checkers for set membership. These drive the weak-duality tests: any
// member's expected objective (constraint) value must lie below (above) the
// solved dual value.

#ifndef DRAB_HARNESS_DISTRIBUTIONS_HPP_
#define DRAB_HARNESS_DISTRIBUTIONS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "drab/linalg.hpp"
#include "drab/moments.hpp"
#include "drab/random.hpp"

namespace drab {

template <typename Atom>
struct DiscreteDistribution {
  std::vector<Atom> atoms;
  std::vector<double> weights;

  Atom mean() const {
    Atom m = weights[0] * atoms[0];
    for (std::size_t i = 1; i < atoms.size(); ++i) m += weights[i] * atoms[i];
    return m;
  }
};

using MatrixDistribution = DiscreteDistribution<HermitianMatrix>;
using VectorDistribution = DiscreteDistribution<ComplexVector>;

struct MembershipReport {
  bool ok = true;
  std::string reason;

  void fail(const std::string& why) {
    if (ok) reason = why;
    ok = false;
  }
};

namespace distribution_detail {

template <typename Atom>
void check_weights(const DiscreteDistribution<Atom>& g, double tol, MembershipReport& rep) {
  if (g.atoms.empty() || g.atoms.size() != g.weights.size()) {
    rep.fail("atoms and weights differ in length or are empty");
    return;
  }
  double sum = 0.0;
  for (double w : g.weights) {
    if (!(w >= 0.0)) rep.fail("negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol) rep.fail("weights do not sum to 1");
}

inline double d1_support_norm(const HermitianMatrix& r, D1Support s) {
  return s == D1Support::kFrobeniusBall ? r.norm() : real_trace(r);
}

inline HermitianMatrix random_hermitian(Rng& rng, int n) {
  const ComplexMatrix g = rng.complex_normal_matrix(n, n);
  return hermitian_part(g);
}

// Largest t in [0, t_max] for which pred(t) holds, assuming pred is true at 0
// and monotone.
template <typename Pred>
double bisect_max(Pred pred, double t_max) {
  if (pred(t_max)) return t_max;
  double lo = 0.0, hi = t_max;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace distribution_detail

/// Atoms inside Z1 (PSD and inside the support ball), mean PSD and within
/// rho1 of S0 in Frobenius norm.
inline MembershipReport check_z1_membership(const MatrixDistribution& g, const D1Params& d1,
                                            double tol = 1e-9) {
  MembershipReport rep;
  distribution_detail::check_weights(g, tol, rep);
  if (!rep.ok) return rep;
  const double scale = std::max(1.0, d1.rho2);
  for (const auto& r : g.atoms) {
    if (r.rows() != d1.dim() || !is_hermitian(r, 1e-12 * scale)) {
      rep.fail("atom is not an N x N Hermitian matrix");
      continue;
    }
    if (lambda_min(r) < -tol * scale) rep.fail("atom is not PSD");
    if (distribution_detail::d1_support_norm(r, d1.support) > d1.rho2 + tol * scale)
      rep.fail("atom lies outside the support ball");
  }
  const HermitianMatrix m = hermitian_part(g.mean());
  if (lambda_min(m) < -tol * scale) rep.fail("mean is not PSD");
  if ((m - d1.S0).norm() > d1.rho1 + tol * scale) rep.fail("mean is farther than rho1 from S0");
  return rep;
}

/// Atoms inside Z2 (the norm shell, or anywhere when unbounded), mean within
/// gamma1 of a0, second moment below (1 + gamma2) Sigma + a0 a0^H.
inline MembershipReport check_z2_membership(const VectorDistribution& g, const D2Params& d2,
                                            double tol = 1e-9) {
  MembershipReport rep;
  distribution_detail::check_weights(g, tol, rep);
  if (!rep.ok) return rep;
  const int n = d2.dim();
  const double scale = std::max(1.0, static_cast<double>(n));
  HermitianMatrix second = HermitianMatrix::Zero(n, n);
  for (std::size_t i = 0; i < g.atoms.size(); ++i) {
    const auto& a = g.atoms[i];
    if (a.size() != n) {
      rep.fail("atom has the wrong dimension");
      return rep;
    }
    if (d2.support == D2Support::kNormShell) {
      const double q = a.squaredNorm();
      if (q < (1.0 - d2.Delta) * n - tol * scale || q > (1.0 + d2.Delta) * n + tol * scale)
        rep.fail("atom lies outside the norm shell");
    }
    second += g.weights[i] * outer(a, a);
  }
  if ((g.mean() - d2.a0).norm() > d2.gamma1 + tol * scale)
    rep.fail("mean is farther than gamma1 from a0");
  const HermitianMatrix bound = (1.0 + d2.gamma2) * d2.Sigma + outer(d2.a0, d2.a0);
  if (lambda_min(hermitian_part(bound - second)) < -tol * scale)
    rep.fail("second moment exceeds (1 + gamma2) Sigma + a0 a0^H");
  return rep;
}

/// Feasible members of the covariance ambiguity set. The first is the point
/// mass at S0 when S0 lies in Z1; the rest mix symmetric pairs M +- t P
/// around a perturbed mean M with, every other draw, a heavy atom on the
/// boundary of the support ball balanced by a light complement.
inline std::vector<MatrixDistribution> sample_feasible_distribution_z1(const D1Params& d1,
                                                                       int count,
                                                                       std::uint64_t seed) {
  using namespace distribution_detail;
  d1.validate();
  const int n = d1.dim();
  auto in_z1 = [&](const HermitianMatrix& r) {
    return lambda_min(r) >= 0.0 && d1_support_norm(r, d1.support) <= d1.rho2;
  };
  std::vector<MatrixDistribution> out;
  if (count <= 0) return out;
  Rng rng(seed);

  // A PSD mean inside Z1 within rho1 of S0, shrinking the perturbation and
  // the scale until both hold.
  auto draw_mean = [&]() -> HermitianMatrix {
    for (int attempt = 0; attempt < 200; ++attempt) {
      HermitianMatrix e = random_hermitian(rng, n);
      e *= rng.uniform(0.0, 1.0) * d1.rho1 / std::max(e.norm(), 1e-300);
      for (int halving = 0; halving < 60; ++halving, e *= 0.5) {
        HermitianMatrix m = hermitian_part(d1.S0 + e);
        // Pull inside the ball along the segment towards 0 when needed; the
        // distance to S0 grows by at most the pull.
        const double nm = d1_support_norm(m, d1.support);
        if (nm > d1.rho2) m *= d1.rho2 / nm * (1.0 - 1e-12);
        if (lambda_min(m) >= 0.0 && (m - d1.S0).norm() <= d1.rho1 && in_z1(m)) return m;
      }
    }
    throw InvalidArgument("sample_feasible_distribution_z1: no feasible mean found");
  };

  if (in_z1(d1.S0)) out.push_back({{d1.S0}, {1.0}});
  while (static_cast<int>(out.size()) < count) {
    const HermitianMatrix m = draw_mean();
    MatrixDistribution g;
    const bool boundary = out.size() % 2 == 1;
    double remaining = 1.0;
    if (boundary) {
      // Heavy atom A on the support boundary, complement B = (m - p A)/(1 - p).
      const ComplexVector u = rng.complex_normal_vector(n).normalized();
      const ComplexVector v = rng.complex_normal_vector(n).normalized();
      HermitianMatrix a = hermitian_part(outer(u, u) + rng.uniform(0.0, 1.0) * outer(v, v));
      a *= d1.rho2 / d1_support_norm(a, d1.support);
      auto ok = [&](double p) {
        const HermitianMatrix b = hermitian_part((m - p * a) / (1.0 - p));
        return in_z1(b);
      };
      const double p = rng.uniform(0.2, 1.0) * bisect_max(ok, 0.999);
      if (p > 0.0) {
        g.atoms.push_back(a);
        g.weights.push_back(p);
        g.atoms.push_back(hermitian_part((m - p * a) / (1.0 - p)));
        g.weights.push_back(1.0 - p);
        out.push_back(g);
        continue;
      }
    }
    const int pairs = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    for (int k = 0; k < pairs; ++k) {
      const double w = k + 1 == pairs ? remaining : remaining * rng.uniform(0.2, 0.8);
      remaining -= w;
      const HermitianMatrix dir = random_hermitian(rng, n);
      auto ok = [&](double t) { return in_z1(m + t * dir) && in_z1(m - t * dir); };
      const double t = rng.uniform(0.3, 1.0) * bisect_max(ok, 10.0 * (d1.rho2 + 1.0));
      g.atoms.push_back(hermitian_part(m + t * dir));
      g.weights.push_back(0.5 * w);
      g.atoms.push_back(hermitian_part(m - t * dir));
      g.weights.push_back(0.5 * w);
    }
    out.push_back(g);
  }
  return out;
}

/// Feasible members of the steering-vector ambiguity set. The first is the
/// point mass at a0 moved onto the shell, when that is feasible. The rest
/// are mean-preserving pairs m +- v_i with v_i = c S^{1/2} u_i / sqrt(w_i),
/// u_i orthonormal and S = (1 + gamma2) Sigma + a0 a0^H - m m^H, which keeps
/// the second moment below its bound; the phase of v_i makes both atoms of a
/// pair equally long.
inline std::vector<VectorDistribution> sample_feasible_distribution_z2(const D2Params& d2,
                                                                       int count,
                                                                       std::uint64_t seed) {
  d2.validate();
  const int n = d2.dim();
  const bool shell = d2.support == D2Support::kNormShell;
  const double lo2 = shell ? (1.0 - d2.Delta) * n : 0.0;
  const double hi2 = shell ? (1.0 + d2.Delta) * n : std::numeric_limits<double>::infinity();
  const HermitianMatrix bound = (1.0 + d2.gamma2) * d2.Sigma + outer(d2.a0, d2.a0);
  std::vector<VectorDistribution> out;
  if (count <= 0) return out;
  Rng rng(seed);

  {
    const double q = d2.a0.squaredNorm();
    ComplexVector a = d2.a0;
    if (q < lo2) a *= std::sqrt(lo2 / q);
    if (q > hi2) a *= std::sqrt(hi2 / q);
    VectorDistribution g{{a}, {1.0}};
    if (check_z2_membership(g, d2, 0.0).ok) out.push_back(g);
  }

  // Mean directions: a0 itself and the leading eigenvectors of Sigma, where
  // the second-moment bound leaves room.
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> sig(d2.Sigma);
  const int lead = std::min(n, 3);

  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 100 * count + 100)
      throw InvalidArgument("sample_feasible_distribution_z2: cannot reach the support set");
    ComplexVector e = rng.uniform(-1.0, 1.0) * d2.a0.normalized();
    for (int k = 0; k < lead; ++k)
      e += rng.complex_normal() * sig.eigenvectors().col(n - 1 - k);
    e *= rng.uniform(0.0, 1.0) * d2.gamma1 / std::max(e.norm(), 1e-300);
    ComplexVector m = d2.a0 + e;
    HermitianMatrix s = hermitian_part(bound - outer(m, m));
    for (int k = 0; k < 60 && lambda_min(s) < 0.0; ++k) {
      e *= 0.5;
      m = d2.a0 + e;
      s = hermitian_part(bound - outer(m, m));
    }
    if (lambda_min(s) < 0.0) continue;
    const double m2 = m.squaredNorm();
    if (m2 > hi2) continue;
    const HermitianMatrix sh = psd_sqrt(s);

    // Random orthonormal basis; K of its vectors carry pairs.
    Eigen::HouseholderQR<ComplexMatrix> qr(rng.complex_normal_matrix(n, n));
    const ComplexMatrix basis = qr.householderQ();
    const int k_pairs = 1 + static_cast<int>(rng.uniform(0.0, std::min(n, 4)));
    std::vector<double> q(k_pairs), r(k_pairs);
    std::vector<ComplexVector> dir(k_pairs);
    for (int i = 0; i < k_pairs; ++i) {
      dir[i] = sh * basis.col(i);
      q[i] = dir[i].squaredNorm();
    }
    // Target pair norms r_i = ||v_i||^2 in [lo2 - m2, hi2 - m2]; weights
    // w_i = c^2 q_i / r_i with c^2 = 1 / sum(q_i / r_i) must keep c <= 1.
    const double rmin = std::max(lo2 - m2, 0.0);
    const double rmax = std::min(hi2 - m2, rmin + 4.0 * n);
    double ratio = 0.0;
    for (int i = 0; i < k_pairs; ++i) {
      r[i] = rmin + rng.uniform(0.0, 1.0) * (rmax - rmin);
      if (!(r[i] > 0.0)) r[i] = 1e-3 * (1.0 + rmax);
      ratio += q[i] / r[i];
    }
    if (!(ratio >= 1.0)) {
      // Shorten every pair to the inner radius and retry the budget.
      ratio = 0.0;
      for (int i = 0; i < k_pairs; ++i) {
        r[i] = rmin > 0.0 ? rmin : 1e-3 * (1.0 + rmax);
        ratio += q[i] / r[i];
      }
      if (!(ratio >= 1.0)) continue;
    }
    VectorDistribution g;
    for (int i = 0; i < k_pairs; ++i) {
      const double w = q[i] / r[i] / ratio;
      ComplexVector v = dir[i] * std::sqrt(r[i] / q[i]);
      // Rotate v so that Re(m^H v) = 0.
      const std::complex<double> mv = m.dot(v);
      if (std::abs(mv) > 0.0) v *= std::complex<double>(0.0, 1.0) * std::conj(mv) / std::abs(mv);
      g.atoms.push_back(m + v);
      g.weights.push_back(0.5 * w);
      g.atoms.push_back(m - v);
      g.weights.push_back(0.5 * w);
    }
    if (check_z2_membership(g, d2).ok) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace drab

#endif  // DRAB_HARNESS_DISTRIBUTIONS_HPP_
