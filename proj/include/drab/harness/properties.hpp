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

// Randomized property suites shared by `drab validate` and the acceptance
// runner. Each oracle is computed independently of the code under test:
// numerical rank and spectra come from a fresh eigendecomposition, and
// expectations under sampled distributions are summed atom by atom.

#ifndef DRAB_HARNESS_PROPERTIES_HPP_
#define DRAB_HARNESS_PROPERTIES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "drab/conic_ipm.hpp"
#include "drab/dro_builders.hpp"
#include "drab/harness/distributions.hpp"
#include "drab/hermitian_conic.hpp"
#include "drab/moments.hpp"
#include "drab/random.hpp"
#include "drab/rank_one.hpp"

namespace drab {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Random PSD matrices of every rank 1..N for N in [2, max_n]: the
/// certificate is <= 1e-10 exactly when the numerical rank is one.
inline PropertyResult rank_gap_suite(int count = 1000, int max_n = 12, std::uint64_t seed = 1) {
  Rng rng(seed);
  int mismatches = 0, negative = 0, rank_one = 0;
  for (int t = 0; t < count; ++t) {
    const int n = 2 + t % (max_n - 1);
    const int rank = 1 + static_cast<int>(rng.uniform(0.0, n));
    const ComplexMatrix u = rng.complex_normal_matrix(n, rank);
    RealVector lam(rank);
    for (int k = 0; k < rank; ++k) lam(k) = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    Eigen::HouseholderQR<ComplexMatrix> qr(u);
    const ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(rank);
    const HermitianMatrix w = hermitian_part(q * lam.cast<Complex>().asDiagonal() * q.adjoint());
    const double gap = rank_gap(w);
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(w, Eigen::EigenvaluesOnly);
    const RealVector ev = es.eigenvalues();
    const double top = ev.maxCoeff();
    int numerical_rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) numerical_rank += ev(i) > 1e-9 * top;
    if (numerical_rank == 1) ++rank_one;
    if ((gap <= 1e-10) != (numerical_rank == 1)) ++mismatches;
    if (gap < -1e-10) ++negative;
  }
  std::ostringstream os;
  os << count << " matrices, " << rank_one << " of rank one, " << mismatches
     << " certificate mismatches, " << negative << " negative gaps";
  return {"rank_gap certificate", mismatches == 0 && negative == 0, os.str()};
}

/// herm_vec is an isometry, preserves inner products, and herm_embed
/// duplicates the spectrum (hence preserves PSD-ness both ways).
inline PropertyResult embedding_suite(int count = 1000, int max_n = 12, std::uint64_t seed = 2) {
  Rng rng(seed);
  double worst_norm = 0.0, worst_inner = 0.0, worst_spec = 0.0, worst_round = 0.0;
  int psd_mismatch = 0;
  for (int t = 0; t < count; ++t) {
    const int n = 1 + t % max_n;
    const ComplexMatrix g = rng.complex_normal_matrix(n, n);
    HermitianMatrix x = hermitian_part(g);
    if (t % 2 == 0) x = hermitian_part(g * g.adjoint());  // PSD half of the trials
    const ComplexMatrix h = rng.complex_normal_matrix(n, n);
    const HermitianMatrix y = hermitian_part(h);
    const RealVector v = herm_vec(x);

    double fro = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) fro += std::norm(x(i, j));
    fro = std::sqrt(fro);
    worst_norm = std::max(worst_norm, std::abs(v.norm() - fro) / fro);

    Complex tr = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) tr += x(i, k) * y(k, i);
    const double ip = v.dot(herm_vec(y));
    worst_inner = std::max(worst_inner, std::abs(ip - tr.real()) / (fro * y.norm()));
    worst_round = std::max(worst_round, (herm_unvec(v) - x).norm() / fro);

    Eigen::SelfAdjointEigenSolver<HermitianMatrix> ex(x, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<RealMatrix> ee(herm_embed(x), Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) {
      const double e = ex.eigenvalues()(i);
      worst_spec = std::max(worst_spec,
                            std::max(std::abs(ee.eigenvalues()(2 * i) - e),
                                     std::abs(ee.eigenvalues()(2 * i + 1) - e)) / fro);
    }
    const double tol = 1e-12 * fro;
    const bool psd_x = ex.eigenvalues().minCoeff() >= -tol;
    const bool psd_e = ee.eigenvalues().minCoeff() >= -tol;
    if (psd_x != psd_e) ++psd_mismatch;
  }
  std::ostringstream os;
  os << count << " matrices; max rel errors: norm " << worst_norm << ", inner product "
     << worst_inner << ", spectrum " << worst_spec << ", round trip " << worst_round
     << "; PSD mismatches " << psd_mismatch;
  const bool ok = worst_norm <= 1e-12 && worst_inner <= 1e-11 && worst_spec <= 1e-12 &&
                  worst_round <= 1e-13 && psd_mismatch == 0;
  return {"herm_vec / herm_embed isometry", ok, os.str()};
}

struct WeakDualityReport {
  double dual_objective = 0.0;   // rho1 ||X|| + rho2 ||W + X|| - tr(X S0)
  double dual_constraint = 0.0;  // x0 + Re(a0^H xv) - gamma1 ||xv|| - tr(Z M)
  double max_objective_excess = -1e300;   // max E tr(R W) - dual_objective
  double min_constraint_margin = 1e300;   // min E a^H W a - dual_constraint
  int non_members = 0;
  bool solved = false;
};

/// Solves the main relaxation and evaluates both inner problems over
/// sampled feasible distributions, for the W returned by the solver.
inline WeakDualityReport weak_duality_check(const D1Params& d1, const D2Params& d2, int count,
                                            std::uint64_t seed, double tol = 1e-8) {
  WeakDualityReport rep;
  const ConicProblemIR ir = build_main_relaxation(d1, d2);
  const ConicSolution sol = solve(ir, tol);
  rep.solved = sol.optimal();
  if (!rep.solved) return rep;
  const DualVariables d = extract_duals(ir, sol.x);
  rep.dual_objective = evaluate_d1_dual(d1, d);
  rep.dual_constraint = evaluate_d2_dual(d2, d);
  for (const auto& g : sample_feasible_distribution_z1(d1, count, seed)) {
    if (!check_z1_membership(g, d1).ok) ++rep.non_members;
    double e = 0.0;
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
      Complex tr = 0.0;
      for (Eigen::Index r = 0; r < d.W.rows(); ++r)
        for (Eigen::Index c = 0; c < d.W.cols(); ++c) tr += g.atoms[i](r, c) * d.W(c, r);
      e += g.weights[i] * tr.real();
    }
    rep.max_objective_excess = std::max(rep.max_objective_excess, e - rep.dual_objective);
  }
  for (const auto& g : sample_feasible_distribution_z2(d2, count, seed + 1)) {
    if (!check_z2_membership(g, d2).ok) ++rep.non_members;
    double e = 0.0;
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
      const ComplexVector wa = d.W * g.atoms[i];
      e += g.weights[i] * g.atoms[i].dot(wa).real();
    }
    rep.min_constraint_margin = std::min(rep.min_constraint_margin, e - rep.dual_constraint);
  }
  return rep;
}

/// Default N-sensor scenario with the given SNR: nominal data for the
/// weak-duality suite.
inline std::pair<D1Params, D2Params> scenario_params(int n, double snr_db, int T,
                                                     std::uint64_t seed) {
  ArrayScenario sc;
  sc.geometry.n_sensors = n;
  sc.snr_db = snr_db;
  const SnapshotBlock blk = synth_snapshots(sc, T, derive_seed(seed, 0, Stream::kSnapshots));
  const SectorMoments m = sector_moments(sc.geometry, sc.sector_deg, 100,
                                         derive_seed(seed, 0, Stream::kSectorSamples));
  const DefaultParams p = default_params(sample_covariance(blk), m.a0, m.Sigma);
  return {p.d1, p.d2};
}

inline PropertyResult weak_duality_suite(int count = 100, int n = 5, std::uint64_t seed = 3) {
  const auto [d1, d2] = scenario_params(n, 0.0, 100, seed);
  const WeakDualityReport r = weak_duality_check(d1, d2, count, seed);
  std::ostringstream os;
  if (!r.solved) return {"weak duality", false, "relaxation did not solve to optimal"};
  os << count << " + " << count << " distributions at N = " << n
     << "; max(E tr(RW) - dual) = " << r.max_objective_excess
     << ", min(E a^H W a - dual) = " << r.min_constraint_margin
     << ", constraint dual = " << r.dual_constraint << ", non-members " << r.non_members;
  const bool ok = r.non_members == 0 && r.max_objective_excess <= 1e-6 &&
                  r.min_constraint_margin >= -1e-6 && r.dual_constraint >= 1.0 - 1e-6;
  return {"weak duality", ok, os.str()};
}

}  // namespace drab

#endif  // DRAB_HARNESS_PROPERTIES_HPP_
