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

#include "drab/harness/properties.hpp"
#include "drab/rank_one.hpp"

namespace drab {
namespace {

HermitianMatrix diag2(double a, double b) {
  HermitianMatrix d = HermitianMatrix::Zero(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

double phase_free_distance(const ComplexVector& a, const ComplexVector& b) {
  const Complex c = b.dot(a);
  const Complex u = std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0, 0.0);
  return (a - u * b).norm();
}

TEST(RankGap, Examples) {
  EXPECT_EQ(rank_gap(diag2(1.0, 0.0)), 0.0);
  EXPECT_NEAR(rank_gap(diag2(1.0, 1.0)), 2.0 - std::sqrt(2.0), 1e-15);
}

TEST(RankGap, ThousandRandomPsd) {
  const PropertyResult r = rank_gap_suite(1000, 12, 17);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(ExtractW, OuterProductRecoversVectorUpToPhase) {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const ComplexVector v = rng.complex_normal_vector(2 + t % 10);
    const ComplexVector w = extract_w(hermitian_part(outer(v, v)));
    EXPECT_LE(phase_free_distance(w, v), 1e-10 * v.norm());
    EXPECT_LE((outer(w, w) - outer(v, v)).norm(), 1e-10 * v.squaredNorm());
  }
}

TEST(ExtractW, DiagonalExample) {
  const ComplexVector w = extract_w(diag2(4.0, 1.0));
  EXPECT_NEAR(std::abs(w(0)), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(w(1)), 0.0, 1e-15);
  EXPECT_NEAR((diag2(4.0, 1.0) - outer(w, w)).norm(), 1.0, 1e-14);
}

TEST(ExtractW, LargestEntryIsRealPositive) {
  Rng rng(2);
  const ComplexVector v = rng.complex_normal_vector(6);
  const ComplexVector w = extract_w(hermitian_part(outer(v, v)));
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  EXPECT_EQ(w(imax).imag(), 0.0);
  EXPECT_GT(w(imax).real(), 0.0);
  // the same W built from a rotated vector gives the same w
  const ComplexVector w2 = extract_w(hermitian_part(outer(Complex(0.0, 1.0) * v,
                                                          Complex(0.0, 1.0) * v)));
  EXPECT_LE((w - w2).norm(), 1e-12 * w.norm());
}

TEST(ExtractW, ResidualBound) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 8;
    const ComplexMatrix a = rng.complex_normal_matrix(n, 1 + t % n);
    const HermitianMatrix W = hermitian_part(a * a.adjoint());
    const ComplexVector w = extract_w(W);
    const RealVector ev = hermitian_eigenvalues(W);
    EXPECT_NEAR(w.squaredNorm(), ev(n - 1), 1e-10 * ev(n - 1));
    EXPECT_LE((W - outer(w, w)).norm(), std::max(ev(n - 2), 0.0) * std::sqrt(double(n)) + 1e-10);
  }
}

TEST(ExtractW, ZeroThrows) {
  EXPECT_THROW(extract_w(HermitianMatrix::Zero(3, 3)), InvalidArgument);
}

TEST(Algorithm1, DefaultSettings) {
  const Algorithm1Settings s;
  EXPECT_EQ(s.alpha, 1e3);
  EXPECT_EQ(s.eta, 1e-6);
  EXPECT_EQ(s.max_iter, 50);
}

TEST(Algorithm1, RejectsBadSettings) {
  const auto [d1, d2] = scenario_params(2, 0.0, 100, 1);
  Algorithm1Settings s;
  s.alpha = 0.0;
  EXPECT_THROW(algorithm1(d1, d2, s), InvalidArgument);
  s = {};
  s.eta = 0.0;
  EXPECT_THROW(algorithm1(d1, d2, s), InvalidArgument);
  s = {};
  s.max_iter = 0;
  EXPECT_THROW(algorithm1(d1, d2, s), InvalidArgument);
}

TEST(Algorithm1, EarlyExitWhenRelaxationIsRankOne) {
  // eta above the relaxation's rank gap takes the Step-2 exit
  const auto [d1, d2] = scenario_params(4, 0.0, 100, 2);
  Algorithm1Settings s;
  s.eta = 1e6;
  const BeamformerResult r = algorithm1(d1, d2, s);
  EXPECT_EQ(r.diagnostics.iterations, 0);
  EXPECT_TRUE(r.diagnostics.objective_sequence.empty());
  EXPECT_LE(r.diagnostics.final_rank_gap, s.eta);
}

TEST(Algorithm1, TenSensorScenarioAtZeroDb) {
  const auto [d1, d2] = scenario_params(10, 0.0, 100, 3);
  const BeamformerResult r = algorithm1(d1, d2);
  const RankOneDiagnostics& d = r.diagnostics;
  EXPECT_LE(d.eigen_ratio, 1e-3);
  EXPECT_FALSE(d.eigen_ratio_flag);
  EXPECT_TRUE(d.feasible) << d.feasibility_violation;
  EXPECT_LE(d.final_rank_gap, 1e-6 + 10 * d.solver_tolerance * std::max(1.0, r.W.norm()));
  for (std::size_t k = 1; k < d.objective_sequence.size(); ++k) {
    const double prev = d.objective_sequence[k - 1];
    EXPECT_LE(d.objective_sequence[k], prev + 1e-6 * std::max(1.0, std::abs(prev)));
  }
  for (double f : d.penalty_sequence) EXPECT_GE(f, -1e-9);
  EXPECT_EQ(d.objective_sequence.size(), static_cast<std::size_t>(d.iterations));
  EXPECT_LE(d.relaxation_value, evaluate_d1_dual(d1, [&] {
    DualVariables x = r.duals;
    x.W = hermitian_part(outer(r.w, r.w));
    return x;
  }()) + 1e-6);
  EXPECT_NEAR((r.W - outer(r.w, r.w)).norm(), 0.0, 1e-3 * r.W.norm());
}

TEST(Algorithm1, MaxIterationsIsADistinctError) {
  // A negligible penalty leaves the relaxation's small rank gap in place.
  const auto [d1, d2] = scenario_params(4, 0.0, 100, 4);
  Algorithm1Settings s;
  s.alpha = 1e-9;
  s.eta = 1e-12;
  s.max_iter = 2;
  try {
    algorithm1(d1, d2, s);
    FAIL() << "expected max_iter to be reached";
  } catch (const Algorithm1Error& e) {
    EXPECT_EQ(e.kind(), Algorithm1Error::Kind::kMaxIterations);
    EXPECT_EQ(e.diagnostics().iterations, 2);
    ASSERT_EQ(e.diagnostics().penalty_sequence.size(), 2u);
    for (double f2 : e.diagnostics().penalty_sequence) EXPECT_GT(f2, s.eta);
    EXPECT_GT(e.diagnostics().final_rank_gap, s.eta);
  }
}

TEST(Algorithm1, SolverFailureCarriesDiagnostics) {
  auto [d1, d2] = scenario_params(3, 0.0, 100, 5);
  d1.support = D1Support::kTraceBall;  // unbounded at the default rho2
  try {
    algorithm1(d1, d2);
    FAIL() << "expected a solver failure";
  } catch (const Algorithm1Error& e) {
    EXPECT_EQ(e.kind(), Algorithm1Error::Kind::kSolverFailure);
    EXPECT_NE(std::string(e.what()).find("unbounded"), std::string::npos);
  }
}

TEST(Algorithm1, DiagnosticsSerialize) {
  const auto [d1, d2] = scenario_params(3, 0.0, 100, 6);
  const nlohmann::json j = to_json(algorithm1(d1, d2).diagnostics);
  for (const char* key : {"objective_sequence", "penalty_sequence", "iterations",
                          "final_rank_gap", "eigen_ratio", "feasible"})
    EXPECT_TRUE(j.contains(key)) << key;
}

}  // namespace
}  // namespace drab
