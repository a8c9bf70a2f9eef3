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

#ifndef DRAB_RANDOM_HPP_
#define DRAB_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "drab/linalg.hpp"

namespace drab {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Named random streams within one Monte Carlo run.
enum class Stream : std::uint64_t {
  kPhaseDistortion = 1,
  kSnapshots = 2,
  kSectorSamples = 3,
  kShapeMatrix = 4,
  kTest = 99,
};

/// seed = mix(mix(mix(master) ^ run) ^ stream). Stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index,
                                 Stream stream) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ run_index);
  return mix64(h ^ static_cast<std::uint64_t>(stream));
}

/// Thin wrapper over mt19937_64 with the draws this library needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * unit_(engine_);
  }

  /// Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  ComplexVector complex_normal_vector(Eigen::Index n) {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  ComplexMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace drab

#endif  // DRAB_RANDOM_HPP_
