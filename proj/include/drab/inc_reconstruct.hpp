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

// Interference-plus-noise covariance reconstruction by integrating the Capon
// spectrum outside the desired-signal sector:
//
//   R = int_{theta not in sector} d(theta) d(theta)^H / (d^H Rhat^{-1} d) dtheta
//       + sigma_n^2 I,
//
// with theta in radians and sigma_n^2 the smallest eigenvalue of Rhat.

#ifndef DRAB_INC_RECONSTRUCT_HPP_
#define DRAB_INC_RECONSTRUCT_HPP_

#include <cmath>
#include <vector>

#include "drab/array_model.hpp"
#include "drab/linalg.hpp"

namespace drab {

enum class Quadrature { kAdaptive, kRectangle };

struct ReconstructionConfig {
  double grid_step_deg = 0.5;
  AngleInterval angle_range_deg{-90.0, 90.0};
  AngleInterval excluded_sector_deg{0.0, 10.0};
  double inversion_loading = -1.0;  // < 0: 1e-6 tr(Rhat) / N
  Quadrature rule = Quadrature::kAdaptive;
  // Adaptive rule only: relative Frobenius tolerance and bisection depth.
  double rel_tol = 1e-8;
  int max_depth = 40;
  bool add_noise_floor = true;

  void validate() const {
    if (!(grid_step_deg > 0.0)) throw InvalidArgument("ReconstructionConfig: grid_step_deg must be > 0");
    if (angle_range_deg.width() <= 0.0)
      throw InvalidArgument("ReconstructionConfig: empty angle range");
    if (excluded_sector_deg.width() < 0.0 ||
        excluded_sector_deg.lo_deg < angle_range_deg.lo_deg ||
        excluded_sector_deg.hi_deg > angle_range_deg.hi_deg)
      throw InvalidArgument("ReconstructionConfig: excluded sector must lie inside the angle range");
    if (!(rel_tol > 0.0)) throw InvalidArgument("ReconstructionConfig: rel_tol must be > 0");
    if (max_depth < 1) throw InvalidArgument("ReconstructionConfig: max_depth must be >= 1");
  }
};

namespace inc_detail {

class CaponIntegrand {
 public:
  CaponIntegrand(const HermitianMatrix& rinv, const ArrayGeometry& geometry)
      : rinv_(rinv), geometry_(geometry) {}

  // d d^H / (d^H Rinv d) at theta (degrees).
  HermitianMatrix operator()(double deg) const {
    const ComplexVector d = ula_steering(geometry_, deg);
    const double den = d.dot(rinv_ * d).real();
    return outer(d, d) / den;
  }

 private:
  HermitianMatrix rinv_;
  ArrayGeometry geometry_;
};

struct Panel {
  double a, b;
  HermitianMatrix fa, fm, fb;
};

// Adaptive Simpson on [a, b] (degrees); returns the integral in radians.
inline HermitianMatrix simpson(const CaponIntegrand& f, const Panel& p, double whole_tol,
                               double total_width, int depth) {
  const double h = p.b - p.a;
  const double m = 0.5 * (p.a + p.b);
  const HermitianMatrix flm = f(0.5 * (p.a + m));
  const HermitianMatrix frm = f(0.5 * (m + p.b));
  const double hr = deg2rad(h);
  const HermitianMatrix whole = hr / 6.0 * (p.fa + 4.0 * p.fm + p.fb);
  const HermitianMatrix left = hr / 12.0 * (p.fa + 4.0 * flm + p.fm);
  const HermitianMatrix right = hr / 12.0 * (p.fm + 4.0 * frm + p.fb);
  const HermitianMatrix both = left + right;
  const double tol = whole_tol * h / total_width;
  if (depth <= 0 || (both - whole).norm() <= 15.0 * tol)
    return both + (both - whole) / 15.0;
  return simpson(f, {p.a, m, p.fa, flm, p.fm}, whole_tol, total_width, depth - 1) +
         simpson(f, {m, p.b, p.fm, frm, p.fb}, whole_tol, total_width, depth - 1);
}

// Pieces of the angle range left after removing the excluded sector.
inline std::vector<AngleInterval> integration_pieces(const ReconstructionConfig& cfg) {
  std::vector<AngleInterval> out;
  const auto& r = cfg.angle_range_deg;
  const auto& x = cfg.excluded_sector_deg;
  if (x.lo_deg > r.lo_deg) out.push_back({r.lo_deg, x.lo_deg});
  if (x.hi_deg < r.hi_deg) out.push_back({x.hi_deg, r.hi_deg});
  return out;
}

}  // namespace inc_detail

/// Capon-integration reconstruction. The adaptive rule starts from panels of
/// width grid_step_deg and bisects until the Simpson error estimate meets
/// rel_tol; the rectangle rule sums grid_step_deg-spaced samples outside the
/// excluded sector.
inline HermitianMatrix capon_reconstruct(const HermitianMatrix& Rhat,
                                         const ArrayGeometry& geometry,
                                         const ReconstructionConfig& cfg = {}) {
  cfg.validate();
  geometry.validate();
  const int n = geometry.n_sensors;
  if (Rhat.rows() != n || Rhat.cols() != n)
    throw InvalidArgument("capon_reconstruct: Rhat size does not match the array");
  require_hermitian(Rhat, "capon_reconstruct.Rhat");
  const double loading =
      cfg.inversion_loading < 0.0 ? 1e-6 * real_trace(Rhat) / n : cfg.inversion_loading;
  const HermitianMatrix loaded = Rhat + loading * HermitianMatrix::Identity(n, n);
  Eigen::LLT<ComplexMatrix> llt(loaded);
  if (llt.info() != Eigen::Success || !(lambda_min(loaded) > 0.0))
    throw SingularMatrix("capon_reconstruct: loaded sample covariance is singular");
  const HermitianMatrix rinv =
      hermitian_part(llt.solve(ComplexMatrix::Identity(n, n)));
  const inc_detail::CaponIntegrand f(rinv, geometry);

  HermitianMatrix out = HermitianMatrix::Zero(n, n);
  if (cfg.rule == Quadrature::kRectangle) {
    const double step = deg2rad(cfg.grid_step_deg);
    const auto& r = cfg.angle_range_deg;
    const long count = static_cast<long>(std::floor(r.width() / cfg.grid_step_deg + 1e-9));
    for (long k = 0; k <= count; ++k) {
      const double deg = r.lo_deg + k * cfg.grid_step_deg;
      if (cfg.excluded_sector_deg.contains(deg)) continue;
      out += step * f(deg);
    }
  } else {
    const auto pieces = inc_detail::integration_pieces(cfg);
    double total = 0.0;
    for (const auto& p : pieces) total += p.width();
    // Coarse pass fixes the absolute tolerance.
    std::vector<inc_detail::Panel> panels;
    HermitianMatrix coarse = HermitianMatrix::Zero(n, n);
    for (const auto& p : pieces) {
      const long count =
          std::max(1L, static_cast<long>(std::ceil(p.width() / cfg.grid_step_deg - 1e-9)));
      const double h = p.width() / count;
      HermitianMatrix fa = f(p.lo_deg);
      for (long k = 0; k < count; ++k) {
        const double a = p.lo_deg + k * h;
        const double b = k + 1 == count ? p.hi_deg : a + h;
        HermitianMatrix fm = f(0.5 * (a + b));
        HermitianMatrix fb = f(b);
        coarse += deg2rad(b - a) / 6.0 * (fa + 4.0 * fm + fb);
        panels.push_back({a, b, fa, fm, fb});
        fa = std::move(fb);
      }
    }
    const double whole_tol = cfg.rel_tol * std::max(coarse.norm(), 1e-300);
    for (const auto& p : panels)
      out += inc_detail::simpson(f, p, whole_tol, total, cfg.max_depth);
  }
  out = hermitian_part(out);
  if (cfg.add_noise_floor) out += lambda_min(Rhat) * HermitianMatrix::Identity(n, n);
  return out;
}

}  // namespace drab

#endif  // DRAB_INC_RECONSTRUCT_HPP_
