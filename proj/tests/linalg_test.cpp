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
#include <set>

#include "drab/linalg.hpp"
#include "drab/random.hpp"

namespace drab {
namespace {

TEST(Linalg, HermitianPartIsHermitian) {
  Rng rng(7);
  const ComplexMatrix a = rng.complex_normal_matrix(5, 5);
  const HermitianMatrix h = hermitian_part(a);
  EXPECT_TRUE(is_hermitian(h));
  EXPECT_FALSE(is_hermitian(a));
  EXPECT_NEAR((h - 0.5 * (a + a.adjoint())).norm(), 0.0, 1e-15);
}

TEST(Linalg, RequireHermitianThrows) {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(require_hermitian(a, "a"), InvalidArgument);
}

TEST(Linalg, ExtremeEigenvaluesOfDiagonal) {
  HermitianMatrix d = HermitianMatrix::Zero(3, 3);
  d.diagonal() << 2.0, -1.0, 0.5;
  EXPECT_DOUBLE_EQ(lambda_max(d), 2.0);
  EXPECT_DOUBLE_EQ(lambda_min(d), -1.0);
}

TEST(Linalg, TraceInnerMatchesElementSum) {
  Rng rng(8);
  const HermitianMatrix a = hermitian_part(rng.complex_normal_matrix(4, 4));
  const HermitianMatrix b = hermitian_part(rng.complex_normal_matrix(4, 4));
  Complex s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, i);
  EXPECT_NEAR(trace_inner(a, b), s.real(), 1e-12);
}

TEST(Linalg, PsdSqrtSquaresBack) {
  Rng rng(9);
  const ComplexMatrix g = rng.complex_normal_matrix(6, 6);
  const HermitianMatrix p = hermitian_part(g * g.adjoint());
  const HermitianMatrix r = psd_sqrt(p);
  EXPECT_TRUE(is_hermitian(r, 1e-10));
  EXPECT_NEAR((r * r - p).norm() / p.norm(), 0.0, 1e-12);
  EXPECT_GE(lambda_min(r), -1e-12);
}

TEST(Linalg, DecibelRoundTrip) {
  EXPECT_DOUBLE_EQ(db10(100.0), 20.0);
  EXPECT_NEAR(undb10(db10(3.7)), 3.7, 1e-14);
  EXPECT_NEAR(deg2rad(180.0), kPi, 1e-15);
  EXPECT_NEAR(rad2deg(deg2rad(33.0)), 33.0, 1e-13);
}

TEST(Random, DerivedSeedsAreStableAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, Stream::kSnapshots), derive_seed(1, 2, Stream::kSnapshots));
  std::set<std::uint64_t> seen;
  for (std::uint64_t run = 0; run < 50; ++run)
    for (Stream s : {Stream::kPhaseDistortion, Stream::kSnapshots, Stream::kSectorSamples,
                     Stream::kShapeMatrix})
      seen.insert(derive_seed(42, run, s));
  EXPECT_EQ(seen.size(), 200u);
}

TEST(Random, ComplexNormalHasUnitPower) {
  Rng rng(10);
  const ComplexVector v = rng.complex_normal_vector(200000);
  EXPECT_NEAR(v.squaredNorm() / v.size(), 1.0, 0.01);
  EXPECT_NEAR(std::abs(v.mean()), 0.0, 0.01);
}

TEST(Random, SameSeedSameDraws) {
  Rng a(11), b(11);
  EXPECT_EQ(a.complex_normal_matrix(3, 3), b.complex_normal_matrix(3, 3));
}

}  // namespace
}  // namespace drab
