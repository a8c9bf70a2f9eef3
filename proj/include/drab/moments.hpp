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

// Steering-vector moments over an angular sector and the parameter records
// of the covariance set (D1, D1') and steering-vector set (D2, D2', D2'')
// families.

#ifndef DRAB_MOMENTS_HPP_
#define DRAB_MOMENTS_HPP_

#include <cmath>
#include <cstdint>

#include "drab/array_model.hpp"
#include "drab/linalg.hpp"
#include "drab/random.hpp"

namespace drab {

/// Support of the covariance distribution: {R >= 0, tr R <= rho2} or
/// {R >= 0, ||R||_F <= rho2}.
enum class D1Support { kTraceBall, kFrobeniusBall };

/// Support of the steering-vector distribution: the norm shell
/// (1 - Delta) N <= ||a||^2 <= (1 + Delta) N, or all of C^N.
enum class D2Support { kNormShell, kUnbounded };

struct D1Params {
  double rho1 = 0.0;
  double rho2 = 1.0;
  HermitianMatrix S0;
  D1Support support = D1Support::kFrobeniusBall;

  int dim() const { return static_cast<int>(S0.rows()); }

  void validate() const {
    if (S0.size() == 0) throw InvalidArgument("D1Params: empty S0");
    require_hermitian(S0, "D1Params.S0");
    if (lambda_min(S0) < -1e-10 * std::max(1.0, lambda_max(S0)))
      throw InvalidArgument("D1Params: S0 must be PSD");
    if (!(rho1 >= 0.0)) throw InvalidArgument("D1Params: rho1 must be >= 0");
    if (!(rho2 > 0.0)) throw InvalidArgument("D1Params: rho2 must be > 0");
  }
};

struct D1PrimeParams {
  double rho1 = 0.1;
  double eps = 0.0;
  HermitianMatrix S0;
  double rho2 = 1.0;
  D1Support support = D1Support::kFrobeniusBall;

  int dim() const { return static_cast<int>(S0.rows()); }

  void validate() const {
    if (S0.size() == 0) throw InvalidArgument("D1PrimeParams: empty S0");
    require_hermitian(S0, "D1PrimeParams.S0");
    if (!(rho1 >= 0.0 && rho1 < 1.0))
      throw InvalidArgument("D1PrimeParams: rho1 must lie in [0, 1)");
    if (!(eps > 0.0)) throw InvalidArgument("D1PrimeParams: eps must be > 0");
    if (!(rho2 > 0.0)) throw InvalidArgument("D1PrimeParams: rho2 must be > 0");
    const HermitianMatrix loaded =
        S0 + eps * HermitianMatrix::Identity(dim(), dim());
    if (!(lambda_min(loaded) > 0.0))
      throw InvalidArgument("D1PrimeParams: S0 + eps I must be positive definite");
  }
};

struct D2Params {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  ComplexVector a0;
  HermitianMatrix Sigma;
  double Delta = 0.1;
  D2Support support = D2Support::kNormShell;

  int dim() const { return static_cast<int>(a0.size()); }

  void validate() const {
    if (a0.size() == 0 || Sigma.rows() != a0.size() || Sigma.cols() != a0.size())
      throw InvalidArgument("D2Params: a0 / Sigma dimension mismatch");
    require_hermitian(Sigma, "D2Params.Sigma");
    if (!(lambda_min(Sigma) > 0.0))
      throw InvalidArgument("D2Params: Sigma must be positive definite");
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0))
      throw InvalidArgument("D2Params: gamma1, gamma2 must be >= 0");
    if (!(Delta > 0.0 && Delta < 1.0))
      throw InvalidArgument("D2Params: Delta must lie in (0, 1)");
  }
};

/// Shared by D2' and D2''. gamma1 bounds (E a - abar)^H Q^{-1} (E a - abar),
/// so it is a squared radius.
struct D2PrimeParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  ComplexVector abar;
  HermitianMatrix Sigmabar;
  HermitianMatrix Q;
  double Delta = 0.1;

  int dim() const { return static_cast<int>(abar.size()); }

  void validate(bool require_pd_sigma = false) const {
    const auto n = abar.size();
    if (n == 0 || Sigmabar.rows() != n || Q.rows() != n || Sigmabar.cols() != n ||
        Q.cols() != n)
      throw InvalidArgument("D2PrimeParams: dimension mismatch");
    require_hermitian(Sigmabar, "D2PrimeParams.Sigmabar");
    require_hermitian(Q, "D2PrimeParams.Q");
    if (!(lambda_min(Q) > 0.0))
      throw InvalidArgument("D2PrimeParams: Q must be positive definite");
    if (require_pd_sigma && !(lambda_min(Sigmabar) > 0.0))
      throw InvalidArgument("D2PPParams: Sigmabar must be positive definite");
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0))
      throw InvalidArgument("D2PrimeParams: gamma1, gamma2 must be >= 0");
    if (!(Delta > 0.0 && Delta < 1.0))
      throw InvalidArgument("D2PrimeParams: Delta must lie in (0, 1)");
  }
};

struct D2PPParams : D2PrimeParams {
  void validate() const { D2PrimeParams::validate(true); }
};

struct SectorMoments {
  ComplexVector a0;
  HermitianMatrix Sigma;  // includes the loading
};

/// Monte Carlo moments of d(theta) for theta ~ U(sector). `loading` is added
/// to the covariance diagonal; pass a negative value to use the default
/// 1e-6 tr(Sigma) / N.
inline SectorMoments sector_moments(const ArrayGeometry& geometry,
                                    const AngleInterval& sector, int L,
                                    std::uint64_t seed, double loading = -1.0) {
  if (L < 2) throw InvalidArgument("sector_moments: L must be >= 2");
  if (sector.width() < 0.0) throw InvalidArgument("sector_moments: reversed sector");
  const int n = geometry.n_sensors;
  Rng rng(seed);
  ComplexMatrix d(n, L);
  for (int l = 0; l < L; ++l)
    d.col(l) = ula_steering(geometry, rng.uniform(sector.lo_deg, sector.hi_deg));
  SectorMoments m;
  m.a0 = d.rowwise().mean();
  const ComplexMatrix centered = d.colwise() - m.a0;
  m.Sigma = hermitian_part(centered * centered.adjoint() / static_cast<double>(L));
  if (loading < 0.0) loading = 1e-6 * real_trace(m.Sigma) / n;
  if (loading == 0.0 && !(lambda_min(m.Sigma) > 0.0))
    throw SingularMatrix("sector_moments: covariance is singular and loading is 0");
  m.Sigma += loading * HermitianMatrix::Identity(n, n);
  return m;
}

/// Default D1/D2 radii: rho1 = 1e-3 ||S0||_F, rho2 = 1.1 tr S0,
/// gamma1 = 1e-2 ||a0||, gamma2 = 0.1, Delta = 0.1.
struct DefaultParams {
  D1Params d1;
  D2Params d2;
};

inline DefaultParams default_params(const HermitianMatrix& S0,
                                    const ComplexVector& a0,
                                    const HermitianMatrix& Sigma) {
  DefaultParams p;
  p.d1.S0 = S0;
  p.d1.rho1 = 1e-3 * S0.norm();
  p.d1.rho2 = 1.1 * real_trace(S0);
  p.d2.a0 = a0;
  p.d2.Sigma = Sigma;
  p.d2.gamma1 = 1e-2 * a0.norm();
  p.d2.gamma2 = 0.1;
  p.d2.Delta = 0.1;
  return p;
}

/// U U^H + 1e-6 I with U standard complex Gaussian.
inline HermitianMatrix random_shape_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix u = rng.complex_normal_matrix(n, n);
  return hermitian_part(u * u.adjoint()) + 1e-6 * HermitianMatrix::Identity(n, n);
}

/// D2' defaults: gamma1 = 1e-2 ||abar||, gamma2 = 1e-2 ||Sigmabar||_F.
inline D2PrimeParams default_d2prime(const ComplexVector& abar,
                                     const HermitianMatrix& Sigmabar,
                                     const HermitianMatrix& Q) {
  D2PrimeParams p;
  p.abar = abar;
  p.Sigmabar = Sigmabar;
  p.Q = Q;
  p.gamma1 = 1e-2 * abar.norm();
  p.gamma2 = 1e-2 * Sigmabar.norm();
  p.Delta = 0.1;
  return p;
}

/// D2'' defaults: gamma1 = 1e-2 ||abar||, gamma2 = 0.1.
inline D2PPParams default_d2pp(const ComplexVector& abar,
                               const HermitianMatrix& Sigmabar,
                               const HermitianMatrix& Q) {
  D2PPParams p;
  static_cast<D2PrimeParams&>(p) = default_d2prime(abar, Sigmabar, Q);
  p.gamma2 = 0.1;
  return p;
}

/// D1' defaults: eps = 1e-2 lambda_max(Rhat), rho1 = 0.1, rho2 = 1.1 tr S0.
inline D1PrimeParams default_d1prime(const HermitianMatrix& S0,
                                     const HermitianMatrix& Rhat) {
  D1PrimeParams p;
  p.S0 = S0;
  p.eps = 1e-2 * lambda_max(Rhat);
  p.rho1 = 0.1;
  p.rho2 = 1.1 * real_trace(S0);
  return p;
}

}  // namespace drab

#endif  // DRAB_MOMENTS_HPP_
