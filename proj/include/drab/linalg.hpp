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

#ifndef DRAB_LINALG_HPP_
#define DRAB_LINALG_HPP_

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace drab {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Hermitian matrices are carried as plain MatrixXcd; functions that require
// the structure check it with `require_hermitian`.
using HermitianMatrix = Eigen::MatrixXcd;

/// Thrown when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a matrix that must be invertible is (numerically) singular.
class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHermitianTol = 1e-12;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double db10(double linear) { return 10.0 * std::log10(linear); }
inline double undb10(double db) { return std::pow(10.0, db / 10.0); }

/// Largest |A - A^H| entry relative to max(1, max|A|).
inline double hermitian_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol) {
  return hermitian_defect(a) <= tol;
}

inline void require_hermitian(const ComplexMatrix& a, const char* what) {
  if (!is_hermitian(a)) {
    throw InvalidArgument(std::string(what) + ": matrix is not Hermitian");
  }
}

/// (A + A^H) / 2.
inline HermitianMatrix hermitian_part(const ComplexMatrix& a) {
  return (a + a.adjoint()) * 0.5;
}

/// Eigenvalues in ascending order.
inline RealVector hermitian_eigenvalues(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double lambda_max(const HermitianMatrix& a) {
  return hermitian_eigenvalues(a).maxCoeff();
}

inline double lambda_min(const HermitianMatrix& a) {
  return hermitian_eigenvalues(a).minCoeff();
}

inline double real_trace(const ComplexMatrix& a) { return a.trace().real(); }

/// Re tr(A B) for Hermitian A, B (the Frobenius inner product).
inline double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

/// Principal square root of a Hermitian PSD matrix. Negative eigenvalues
/// from round-off are clamped to zero.
inline HermitianMatrix psd_sqrt(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

inline ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v) {
  return u * v.adjoint();
}

}  // namespace drab

#endif  // DRAB_LINALG_HPP_
