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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "drab/array_model.hpp"

namespace drab {
namespace {

ArrayGeometry ula(int n, double d = 0.5) {
  ArrayGeometry g;
  g.n_sensors = n;
  g.spacing_wavelengths = d;
  return g;
}

TEST(UlaSteering, BroadsideIsAllOnes) {
  const ComplexVector a = ula_steering(ula(4), 0.0);
  for (int n = 0; n < 4; ++n) EXPECT_EQ(a(n), Complex(1.0, 0.0));
}

TEST(UlaSteering, EndfireHalfWavelengthAlternates) {
  // e^{j pi sin 90} = -1
  const ComplexVector a = ula_steering(ula(2), 90.0);
  EXPECT_NEAR(std::abs(a(0) - Complex(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1) - Complex(-1.0, 0.0)), 0.0, 1e-15);
}

TEST(UlaSteering, SquaredNormIsN) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 30;
    const double d = rng.uniform(0.1, 2.0);
    const double th = rng.uniform(-90.0, 90.0);
    EXPECT_NEAR(ula_steering(ula(n, d), th).squaredNorm(), n, 1e-12);
  }
}

TEST(UlaSteering, RejectsAngleOutOfRange) {
  EXPECT_THROW(ula_steering(ula(4), 90.5), InvalidArgument);
  EXPECT_THROW(ula_steering(ula(4), std::nan("")), InvalidArgument);
}

TEST(DistortSteering, ZeroStdIsIdentity) {
  const ComplexVector a = ula_steering(ula(8), 12.0);
  EXPECT_EQ(distort_steering(a, 0.0, 3), a);
}

TEST(DistortSteering, PreservesEntryModulus) {
  const ComplexVector a = ula_steering(ula(16), -20.0);
  const ComplexVector b = distort_steering(a, 0.3, 5);
  for (Eigen::Index n = 0; n < a.size(); ++n) EXPECT_NEAR(std::abs(b(n)), std::abs(a(n)), 1e-15);
  EXPECT_NEAR(b.norm(), a.norm(), 1e-13);
  EXPECT_GT((b - a).norm(), 0.0);
}

TEST(DistortSteering, Deterministic) {
  const ComplexVector a = ula_steering(ula(8), 5.0);
  EXPECT_EQ(distort_steering(a, 0.02, 9), distort_steering(a, 0.02, 9));
  EXPECT_NE(distort_steering(a, 0.02, 9), distort_steering(a, 0.02, 10));
}

TEST(DistortSteering, PhaseIncrementsAccumulate) {
  // Phase errors of a random walk: the increment variance is std^2 at every
  // sensor, so the variance of sensor n's error grows like (n + 1) std^2.
  const ComplexVector a = ComplexVector::Ones(6);
  const double std = 0.05;
  RealVector var = RealVector::Zero(6);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const ComplexVector b = distort_steering(a, std, 1000 + t);
    for (int n = 0; n < 6; ++n) var(n) += std::pow(std::arg(b(n)), 2);
  }
  var /= trials;
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(var(n) / ((n + 1) * std * std), 1.0, 0.05);
}

TEST(SynthSnapshots, NoiseOnlyPowerMatchesNoisePower) {
  ArrayScenario sc;
  sc.snr_db = -std::numeric_limits<double>::infinity();
  sc.interferers.clear();
  sc.noise_power = 2.5;
  const SnapshotBlock b = synth_snapshots(sc, 10000, 4);
  for (int n = 0; n < sc.geometry.n_sensors; ++n) {
    const double p = b.samples.row(n).squaredNorm() / b.size();
    EXPECT_NEAR(p / sc.noise_power, 1.0, 0.05);
  }
}

TEST(SynthSnapshots, SameSeedIsBitIdentical) {
  ArrayScenario sc;
  const SnapshotBlock a = synth_snapshots(sc, 100, 77);
  const SnapshotBlock b = synth_snapshots(sc, 100, 77);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.desired_steering, b.desired_steering);
}

TEST(SynthSnapshots, DefaultScenarioShape) {
  ArrayScenario sc;
  EXPECT_EQ(sc.geometry.n_sensors, 10);
  EXPECT_EQ(sc.interferers.size(), 2u);
  const SnapshotBlock b = synth_snapshots(sc, 100, 1);
  EXPECT_EQ(b.samples.rows(), 10);
  EXPECT_EQ(b.samples.cols(), 100);
  EXPECT_THROW(synth_snapshots(sc, 0, 1), InvalidArgument);
}

TEST(SynthSnapshots, DesiredSteeringIsDistortedTrueDoa) {
  ArrayScenario sc;
  const SnapshotBlock b = synth_snapshots(sc, 10, 3);
  const ComplexVector a = ula_steering(sc.geometry, sc.true_doa_deg);
  for (int n = 0; n < 10; ++n) EXPECT_NEAR(std::abs(b.desired_steering(n)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(b.desired_steering(0) / a(0)), 1.0, 1e-15);
  EXPECT_LT((b.desired_steering - a).norm(), 0.5);
}

TEST(SampleCovariance, EqualSamplesGiveOuterProduct) {
  Rng rng(2);
  const ComplexVector y = rng.complex_normal_vector(5);
  SnapshotBlock b;
  b.samples = y.replicate(1, 7);
  EXPECT_NEAR((sample_covariance(b) - y * y.adjoint()).norm(), 0.0, 1e-13);
}

TEST(SampleCovariance, NoiseOnlyConvergesToIdentity) {
  ArrayScenario sc;
  sc.snr_db = -std::numeric_limits<double>::infinity();
  sc.interferers.clear();
  const HermitianMatrix r = sample_covariance(synth_snapshots(sc, 10000, 5));
  const HermitianMatrix i = HermitianMatrix::Identity(10, 10);
  EXPECT_LE((r - i).norm() / i.norm(), 0.05);
}

TEST(SampleCovariance, HermitianPsd) {
  ArrayScenario sc;
  for (int t : {1, 3, 10, 100}) {
    const HermitianMatrix r = sample_covariance(synth_snapshots(sc, t, 6 + t));
    EXPECT_TRUE(is_hermitian(r));
    EXPECT_GE(lambda_min(r), -1e-10);
  }
}

TEST(TrueInc, NoInterferersIsScaledIdentity) {
  ArrayScenario sc;
  sc.interferers.clear();
  EXPECT_EQ(true_inc(sc), HermitianMatrix::Identity(10, 10));
}

TEST(TrueInc, SingleInterfererSpectrum) {
  // rank-one update of the identity: one eigenvalue 1 + INR * N, rest 1
  ArrayScenario sc;
  sc.interferers = {{-30.0, 30.0}};
  const RealVector ev = hermitian_eigenvalues(true_inc(sc));
  EXPECT_NEAR(ev(9), 1.0 + 1000.0 * 10, 1e-8);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-9);
}

TEST(TrueInc, DefaultInterferers) {
  ArrayScenario sc;
  ASSERT_EQ(sc.interferers.size(), 2u);
  EXPECT_EQ(sc.interferers[0].doa_deg, -5.0);
  EXPECT_EQ(sc.interferers[1].doa_deg, 15.0);
  EXPECT_EQ(sc.interferers[0].inr_db, 30.0);
  EXPECT_EQ(sc.interferers[1].inr_db, 30.0);
  const HermitianMatrix r = true_inc(sc);
  EXPECT_GT(lambda_min(r), 0.0);
  const ComplexVector d = ula_steering(sc.geometry, -5.0);
  EXPECT_NEAR(d.dot(r * d).real(), 100.0 * 1000.0 + 10.0 + 1000.0 * std::norm(
      ula_steering(sc.geometry, 15.0).dot(d)), 1e-6);
}

TEST(OutputSinr, MatchedFilterInWhiteNoise) {
  const ComplexVector a = ula_steering(ula(10), 7.0);
  EXPECT_NEAR(output_sinr(a, a, 1.0, HermitianMatrix::Identity(10, 10)), db10(10.0), 1e-12);
}

TEST(OutputSinr, ScaleInvariant) {
  ArrayScenario sc;
  const HermitianMatrix r = true_inc(sc);
  const ComplexVector a = ula_steering(sc.geometry, 5.0);
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const ComplexVector w = rng.complex_normal_vector(10);
    const Complex c = rng.complex_normal() * rng.uniform(1e-3, 1e3);
    EXPECT_NEAR(output_sinr(c * w, a, 1.0, r), output_sinr(w, a, 1.0, r), 1e-10);
  }
}

TEST(OutputSinr, RejectsZeroWeight) {
  const ComplexVector a = ComplexVector::Ones(3);
  EXPECT_THROW(output_sinr(ComplexVector::Zero(3), a, 1.0, HermitianMatrix::Identity(3, 3)),
               InvalidArgument);
}

TEST(OptimalSinr, WhiteNoise) {
  const ComplexVector a = ula_steering(ula(6), -3.0);
  EXPECT_NEAR(optimal_sinr(a, 2.0, HermitianMatrix::Identity(6, 6)), db10(12.0), 1e-12);
}

TEST(OptimalSinr, TwoSensorHandEvaluated) {
  // a^H R^{-1} a = 1/1 + 1/2
  HermitianMatrix r = HermitianMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  r(1, 1) = 2.0;
  EXPECT_NEAR(optimal_sinr(ComplexVector::Ones(2), 1.0, r), db10(1.5), 1e-14);
}

TEST(OptimalSinr, BoundsEveryWeight) {
  ArrayScenario sc;
  const HermitianMatrix r = true_inc(sc);
  const ComplexVector a = ula_steering(sc.geometry, 5.0);
  const double best = optimal_sinr(a, 1.0, r);
  Rng rng(13);
  for (int t = 0; t < 100; ++t)
    EXPECT_LE(output_sinr(rng.complex_normal_vector(10), a, 1.0, r), best + 1e-9);
  const ComplexVector wopt = r.llt().solve(a);
  EXPECT_NEAR(output_sinr(wopt, a, 1.0, r), best, 1e-9);
}

TEST(OptimalSinr, SingularThrows) {
  EXPECT_THROW(optimal_sinr(ComplexVector::Ones(2), 1.0, HermitianMatrix::Zero(2, 2)),
               SingularMatrix);
}

TEST(ArrayScenario, ValidateWarnsOnInterfererInSector) {
  ArrayScenario sc;
  sc.interferers.push_back({4.0, 10.0});
  EXPECT_EQ(sc.validate().size(), 1u);
  sc.presumed_doa_deg = 20.0;
  EXPECT_THROW(sc.validate(), InvalidArgument);
}

}  // namespace
}  // namespace drab
