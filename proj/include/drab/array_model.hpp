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

// Narrowband uniform-linear-array signal model: steering vectors, snapshot
// synthesis, covariance matrices and output SINR.

#ifndef DRAB_ARRAY_MODEL_HPP_
#define DRAB_ARRAY_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "drab/linalg.hpp"
#include "drab/random.hpp"

namespace drab {

struct ArrayGeometry {
  int n_sensors = 10;
  double spacing_wavelengths = 0.5;

  void validate() const {
    if (n_sensors < 2) throw InvalidArgument("ArrayGeometry: n_sensors < 2");
    if (!(spacing_wavelengths > 0.0))
      throw InvalidArgument("ArrayGeometry: spacing must be positive");
  }
};

struct AngleInterval {
  double lo_deg = 0.0;
  double hi_deg = 0.0;

  double width() const { return hi_deg - lo_deg; }
  bool contains(double deg) const { return deg >= lo_deg && deg <= hi_deg; }
};

struct Interferer {
  double doa_deg = 0.0;
  double inr_db = 0.0;
};

/// Ground-truth description of one simulated environment.
struct ArrayScenario {
  ArrayGeometry geometry;
  double true_doa_deg = 5.0;
  double presumed_doa_deg = 1.0;
  AngleInterval sector_deg{0.0, 10.0};
  std::vector<Interferer> interferers{{-5.0, 30.0}, {15.0, 30.0}};
  double noise_power = 1.0;  // linear
  double snr_db = 0.0;       // per-antenna; -inf switches the signal off
  double phase_distortion_std = 0.02;

  double signal_power() const { return noise_power * undb10(snr_db); }
  double interferer_power(const Interferer& i) const {
    return noise_power * undb10(i.inr_db);
  }

  /// Throws on hard violations. Soft violations (interferer inside the
  /// sector) are reported through the returned list.
  std::vector<std::string> validate() const {
    geometry.validate();
    if (!(noise_power > 0.0))
      throw InvalidArgument("ArrayScenario: noise_power must be positive");
    if (phase_distortion_std < 0.0)
      throw InvalidArgument("ArrayScenario: negative phase distortion std");
    if (sector_deg.width() < 0.0)
      throw InvalidArgument("ArrayScenario: sector bounds reversed");
    if (!sector_deg.contains(presumed_doa_deg))
      throw InvalidArgument("ArrayScenario: presumed DOA outside sector");
    std::vector<std::string> warnings;
    for (const auto& i : interferers) {
      if (sector_deg.contains(i.doa_deg)) {
        warnings.push_back("interferer at " + std::to_string(i.doa_deg) +
                           " deg lies inside the signal sector");
      }
    }
    return warnings;
  }
};

/// T snapshots stored column-wise (N x T).
struct SnapshotBlock {
  ComplexMatrix samples;
  std::uint64_t seed = 0;
  ComplexVector desired_steering;  // realized (distorted) true steering vector

  Eigen::Index size() const { return samples.cols(); }
};

/// Element n carries phase 2*pi*spacing*n*sin(theta); broadside is 0 deg.
inline ComplexVector ula_steering(const ArrayGeometry& geometry,
                                  double theta_deg) {
  if (!(std::abs(theta_deg) <= 90.0))
    throw InvalidArgument("ula_steering: |theta| must not exceed 90 deg");
  geometry.validate();
  const double k = 2.0 * kPi * geometry.spacing_wavelengths *
                   std::sin(deg2rad(theta_deg));
  ComplexVector a(geometry.n_sensors);
  for (int n = 0; n < geometry.n_sensors; ++n) a(n) = std::polar(1.0, k * n);
  return a;
}

/// Multiplies entry n by exp(j * sum_{m<=n} e_m), e_m ~ N(0, std^2) i.i.d.
/// The accumulation starts at the first sensor.
inline ComplexVector distort_steering(const ComplexVector& a, double std,
                                      std::uint64_t seed) {
  if (std < 0.0) throw InvalidArgument("distort_steering: negative std");
  if (std == 0.0) return a;
  Rng rng(seed);
  ComplexVector out(a.size());
  double phase = 0.0;
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    phase += std * rng.normal();
    out(n) = a(n) * std::polar(1.0, phase);
  }
  return out;
}

/// The distorted true-DOA steering vector used for run `seed`. Fixed for all
/// snapshots of that run.
inline ComplexVector realized_steering(const ArrayScenario& scenario,
                                       std::uint64_t seed) {
  return distort_steering(
      ula_steering(scenario.geometry, scenario.true_doa_deg),
      scenario.phase_distortion_std,
      derive_seed(seed, 0, Stream::kPhaseDistortion));
}

inline SnapshotBlock synth_snapshots(const ArrayScenario& scenario, int T,
                                     std::uint64_t seed) {
  if (T < 1) throw InvalidArgument("synth_snapshots: T must be >= 1");
  scenario.validate();
  const int n = scenario.geometry.n_sensors;
  SnapshotBlock block;
  block.seed = seed;
  block.desired_steering = realized_steering(scenario, seed);

  Rng rng(derive_seed(seed, 0, Stream::kSnapshots));
  ComplexMatrix y = ComplexMatrix::Zero(n, T);

  const double ps = scenario.signal_power();
  if (ps > 0.0) {
    const ComplexVector s = rng.complex_normal_vector(T) * std::sqrt(ps);
    y += block.desired_steering * s.transpose();
  }
  for (const auto& intf : scenario.interferers) {
    const ComplexVector d = ula_steering(scenario.geometry, intf.doa_deg);
    const ComplexVector s =
        rng.complex_normal_vector(T) * std::sqrt(scenario.interferer_power(intf));
    y += d * s.transpose();
  }
  y += rng.complex_normal_matrix(n, T) * std::sqrt(scenario.noise_power);
  block.samples = std::move(y);
  return block;
}

/// R = (1/T) sum_t y(t) y(t)^H.
inline HermitianMatrix sample_covariance(const SnapshotBlock& block) {
  if (block.size() < 1)
    throw InvalidArgument("sample_covariance: empty snapshot block");
  HermitianMatrix r =
      block.samples * block.samples.adjoint() / static_cast<double>(block.size());
  return hermitian_part(r);
}

/// Interference-plus-noise covariance sigma_n^2 I + sum_k sigma_k^2 d_k d_k^H.
inline HermitianMatrix true_inc(const ArrayScenario& scenario) {
  scenario.validate();
  const int n = scenario.geometry.n_sensors;
  HermitianMatrix r = HermitianMatrix::Identity(n, n) * scenario.noise_power;
  for (const auto& intf : scenario.interferers) {
    const ComplexVector d = ula_steering(scenario.geometry, intf.doa_deg);
    r += scenario.interferer_power(intf) * outer(d, d);
  }
  return r;
}

/// 10 log10(sigma_s^2 |w^H a|^2 / (w^H R w)).
inline double output_sinr(const ComplexVector& w, const ComplexVector& a_true,
                          double sigma_s2, const HermitianMatrix& r_in) {
  if (w.size() != a_true.size() || r_in.rows() != w.size())
    throw InvalidArgument("output_sinr: dimension mismatch");
  if (w.squaredNorm() == 0.0) throw InvalidArgument("output_sinr: zero weight");
  const double num = sigma_s2 * std::norm(w.dot(a_true));
  const double den = w.dot(r_in * w).real();
  if (!(den > 0.0))
    throw InvalidArgument("output_sinr: R_in must be positive definite");
  return db10(num / den);
}

/// MVDR ceiling sigma_s^2 a^H R^{-1} a, in dB.
inline double optimal_sinr(const ComplexVector& a_true, double sigma_s2,
                           const HermitianMatrix& r_in) {
  Eigen::LLT<ComplexMatrix> llt(r_in);
  if (llt.info() != Eigen::Success)
    throw SingularMatrix("optimal_sinr: R_in is not positive definite");
  const double q = a_true.dot(llt.solve(a_true)).real();
  return db10(sigma_s2 * q);
}

}  // namespace drab

#endif  // DRAB_ARRAY_MODEL_HPP_
