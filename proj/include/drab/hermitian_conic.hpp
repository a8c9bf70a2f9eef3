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

// Solver-agnostic conic problem representation and the real-arithmetic
// encodings of complex Hermitian data.
//
// Vectorization conventions
// -------------------------
// herm_vec maps an N x N Hermitian matrix to R^{N^2}: the N diagonal entries
// first, then for every pair i < j (row-major order) the two numbers
// sqrt(2) Re X_ij and sqrt(2) Im X_ij. The map is an isometry, so
// tr(XY) = herm_vec(X) . herm_vec(Y).
//
// svec maps a real symmetric n x n matrix to R^{n(n+1)/2}, column-major
// lower triangle with off-diagonals scaled by sqrt(2). PSD cone blocks of a
// ConicProblemIR are stated in svec coordinates.
//
// Complex vector variables are stored interleaved: (Re v_0, Im v_0, ...).

#ifndef DRAB_HERMITIAN_CONIC_HPP_
#define DRAB_HERMITIAN_CONIC_HPP_

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "drab/linalg.hpp"

namespace drab {

inline constexpr double kSqrt2 = 1.41421356237309504880;

// ---------------------------------------------------------------------------
// Hermitian <-> real encodings
// ---------------------------------------------------------------------------

inline RealVector herm_vec(const HermitianMatrix& x) {
  require_hermitian(x, "herm_vec");
  const Eigen::Index n = x.rows();
  RealVector v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = x(i, i).real();
  Eigen::Index k = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      v(k++) = kSqrt2 * x(i, j).real();
      v(k++) = kSqrt2 * x(i, j).imag();
    }
  }
  return v;
}

inline int herm_dim_from_size(Eigen::Index size) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size))));
  if (static_cast<Eigen::Index>(n) * n != size)
    throw InvalidArgument("herm_unvec: length is not a perfect square");
  return n;
}

inline HermitianMatrix herm_unvec(const RealVector& v) {
  const int n = herm_dim_from_size(v.size());
  HermitianMatrix x(n, n);
  for (int i = 0; i < n; ++i) x(i, i) = v(i);
  Eigen::Index k = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Complex c(v(k) / kSqrt2, v(k + 1) / kSqrt2);
      x(i, j) = c;
      x(j, i) = std::conj(c);
      k += 2;
    }
  }
  return x;
}

/// [[Re X, -Im X], [Im X, Re X]]; accepts any square complex matrix.
inline RealMatrix complex_embed(const ComplexMatrix& x) {
  const Eigen::Index n = x.rows();
  RealMatrix e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = x.real();
  e.topRightCorner(n, n) = -x.imag();
  e.bottomLeftCorner(n, n) = x.imag();
  e.bottomRightCorner(n, n) = x.real();
  return e;
}

inline RealMatrix herm_embed(const HermitianMatrix& x) {
  require_hermitian(x, "herm_embed");
  return complex_embed(x);
}

/// Inverse of herm_embed (reads the left block column).
inline HermitianMatrix herm_unembed(const RealMatrix& e) {
  const Eigen::Index n = e.rows() / 2;
  ComplexMatrix x(n, n);
  x.real() = e.topLeftCorner(n, n);
  x.imag() = e.bottomLeftCorner(n, n);
  return hermitian_part(x);
}

inline int svec_size(int n) { return n * (n + 1) / 2; }

inline int svec_order(Eigen::Index size) {
  const int n = static_cast<int>(
      std::lround((std::sqrt(8.0 * static_cast<double>(size) + 1.0) - 1.0) / 2.0));
  if (svec_size(n) != size) throw InvalidArgument("svec: bad length");
  return n;
}

inline RealVector svec(const RealMatrix& m) {
  const Eigen::Index n = m.rows();
  RealVector v(svec_size(static_cast<int>(n)));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    v(k++) = m(j, j);
    for (Eigen::Index i = j + 1; i < n; ++i) v(k++) = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  }
  return v;
}

inline RealMatrix smat(const Eigen::Ref<const RealVector>& v) {
  const int n = svec_order(v.size());
  RealMatrix m(n, n);
  Eigen::Index k = 0;
  for (int j = 0; j < n; ++j) {
    m(j, j) = v(k++);
    for (int i = j + 1; i < n; ++i) {
      m(i, j) = m(j, i) = v(k++) / kSqrt2;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Affine expressions over the IR variable vector
// ---------------------------------------------------------------------------

/// c^T x + constant.
struct LinearExpr {
  RealVector coef;
  double constant = 0.0;

  static LinearExpr zero(int n_vars) { return {RealVector::Zero(n_vars), 0.0}; }

  double eval(const RealVector& x) const { return coef.dot(x) + constant; }

  LinearExpr& operator+=(const LinearExpr& o) {
    coef += o.coef;
    constant += o.constant;
    return *this;
  }
  LinearExpr& operator-=(const LinearExpr& o) {
    coef -= o.coef;
    constant -= o.constant;
    return *this;
  }
  LinearExpr& operator+=(double c) {
    constant += c;
    return *this;
  }
  LinearExpr& operator-=(double c) {
    constant -= c;
    return *this;
  }
  LinearExpr& operator*=(double s) {
    coef *= s;
    constant *= s;
    return *this;
  }
};

inline LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
inline LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
inline LinearExpr operator+(LinearExpr a, double c) { return a += c; }
inline LinearExpr operator-(LinearExpr a, double c) { return a -= c; }
inline LinearExpr operator*(double s, LinearExpr a) { return a *= s; }
inline LinearExpr operator-(LinearExpr a) { return a *= -1.0; }

/// M x + constant, a real vector-valued affine map.
struct VectorExpr {
  RealMatrix coef;
  RealVector constant;

  static VectorExpr zero(int rows, int n_vars) {
    return {RealMatrix::Zero(rows, n_vars), RealVector::Zero(rows)};
  }
  Eigen::Index rows() const { return coef.rows(); }
  RealVector eval(const RealVector& x) const { return coef * x + constant; }

  VectorExpr& operator+=(const VectorExpr& o) {
    coef += o.coef;
    constant += o.constant;
    return *this;
  }
  VectorExpr& operator-=(const VectorExpr& o) {
    coef -= o.coef;
    constant -= o.constant;
    return *this;
  }
  VectorExpr& operator*=(double s) {
    coef *= s;
    constant *= s;
    return *this;
  }
};

inline VectorExpr operator+(VectorExpr a, const VectorExpr& b) { return a += b; }
inline VectorExpr operator-(VectorExpr a, const VectorExpr& b) { return a -= b; }
inline VectorExpr operator*(double s, VectorExpr a) { return a *= s; }

/// Complex-matrix-valued affine map sum_k x_k C_k + C_0. Column k of `coef`
/// holds vec(C_k) in column-major order. Expressions built from Hermitian
/// pieces stay Hermitian.
struct MatrixExpr {
  int rows = 0;
  int cols = 0;
  ComplexMatrix coef;      // (rows*cols) x n_vars
  ComplexMatrix constant;  // rows x cols

  static MatrixExpr zero(int rows, int cols, int n_vars) {
    return {rows, cols, ComplexMatrix::Zero(Eigen::Index{rows} * cols, n_vars),
            ComplexMatrix::Zero(rows, cols)};
  }
  static MatrixExpr constant_matrix(const ComplexMatrix& c, int n_vars) {
    MatrixExpr e = zero(static_cast<int>(c.rows()), static_cast<int>(c.cols()), n_vars);
    e.constant = c;
    return e;
  }

  int n_vars() const { return static_cast<int>(coef.cols()); }

  ComplexMatrix term(int k) const {
    return Eigen::Map<const ComplexMatrix>(coef.col(k).data(), rows, cols);
  }

  ComplexMatrix eval(const RealVector& x) const {
    ComplexVector flat = coef * x.cast<Complex>();
    ComplexMatrix m = Eigen::Map<ComplexMatrix>(flat.data(), rows, cols);
    return m + constant;
  }

  MatrixExpr adjoint() const {
    MatrixExpr out = zero(cols, rows, n_vars());
    for (int k = 0; k < n_vars(); ++k) {
      ComplexMatrix t = term(k).adjoint();
      out.coef.col(k) = Eigen::Map<ComplexVector>(t.data(), t.size());
    }
    out.constant = constant.adjoint();
    return out;
  }

  /// Left multiplication by a constant matrix.
  MatrixExpr left_multiply(const ComplexMatrix& m) const {
    MatrixExpr out = zero(static_cast<int>(m.rows()), cols, n_vars());
    for (int k = 0; k < n_vars(); ++k) {
      if (coef.col(k).isZero(0.0)) continue;
      ComplexMatrix t = m * term(k);
      out.coef.col(k) = Eigen::Map<ComplexVector>(t.data(), t.size());
    }
    out.constant = m * constant;
    return out;
  }

  MatrixExpr& operator+=(const MatrixExpr& o) {
    coef += o.coef;
    constant += o.constant;
    return *this;
  }
  MatrixExpr& operator-=(const MatrixExpr& o) {
    coef -= o.coef;
    constant -= o.constant;
    return *this;
  }
  MatrixExpr& operator*=(double s) {
    coef *= s;
    constant *= s;
    return *this;
  }
};

inline MatrixExpr operator+(MatrixExpr a, const MatrixExpr& b) { return a += b; }
inline MatrixExpr operator-(MatrixExpr a, const MatrixExpr& b) { return a -= b; }
inline MatrixExpr operator*(double s, MatrixExpr a) { return a *= s; }

/// Scalar linear expression times a constant matrix.
inline MatrixExpr scale_matrix(const LinearExpr& s, const ComplexMatrix& m) {
  const int n_vars = static_cast<int>(s.coef.size());
  MatrixExpr out = MatrixExpr::zero(static_cast<int>(m.rows()),
                                    static_cast<int>(m.cols()), n_vars);
  const Eigen::Map<const ComplexVector> flat(m.data(), m.size());
  for (int k = 0; k < n_vars; ++k) {
    if (s.coef(k) != 0.0) out.coef.col(k) = s.coef(k) * flat;
  }
  out.constant = s.constant * m;
  return out;
}

/// Assembles a block matrix expression from a grid of blocks.
inline MatrixExpr block_matrix(const std::vector<std::vector<MatrixExpr>>& grid) {
  const int n_vars = grid.at(0).at(0).n_vars();
  int rows = 0;
  int cols = 0;
  for (const auto& row : grid) rows += row.at(0).rows;
  for (const auto& b : grid.at(0)) cols += b.cols;
  MatrixExpr out = MatrixExpr::zero(rows, cols, n_vars);
  int r0 = 0;
  for (const auto& row : grid) {
    int c0 = 0;
    for (const auto& b : row) {
      if (b.rows != row.at(0).rows)
        throw InvalidArgument("block_matrix: inconsistent block heights");
      for (int k = 0; k < n_vars; ++k) {
        if (b.coef.col(k).isZero(0.0)) continue;
        Eigen::Map<ComplexMatrix> dst(out.coef.col(k).data(), rows, cols);
        dst.block(r0, c0, b.rows, b.cols) = b.term(k);
      }
      out.constant.block(r0, c0, b.rows, b.cols) = b.constant;
      c0 += b.cols;
    }
    if (c0 != cols) throw InvalidArgument("block_matrix: ragged block row");
    r0 += row.at(0).rows;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conic problem IR
// ---------------------------------------------------------------------------

enum class ConeKind { kZero, kNonnegative, kSecondOrder, kPsd };

inline const char* to_string(ConeKind k) {
  switch (k) {
    case ConeKind::kZero: return "zero";
    case ConeKind::kNonnegative: return "nonneg";
    case ConeKind::kSecondOrder: return "soc";
    case ConeKind::kPsd: return "psd";
  }
  return "?";
}

/// map * x + offset must lie in the cone. For kPsd the rows are svec
/// coordinates of a symmetric matrix of order `psd_order`; for kSecondOrder
/// row 0 is the epigraph coordinate.
struct ConeConstraint {
  ConeKind kind = ConeKind::kNonnegative;
  int psd_order = 0;
  std::string label;
  Eigen::SparseMatrix<double, Eigen::RowMajor> map;
  RealVector offset;

  Eigen::Index dim() const { return offset.size(); }
};

enum class VariableKind { kScalar, kComplexVector, kHermitian };

struct VariableSlice {
  std::string name;
  VariableKind kind = VariableKind::kScalar;
  int offset = 0;
  int size = 0;  // number of real coordinates
  int dim = 1;   // N for complex vectors and Hermitian matrices
};

class ConicProblemIR {
 public:
  ConicProblemIR() = default;

  int n_vars() const { return n_vars_; }
  const std::vector<VariableSlice>& variables() const { return variables_; }
  const std::vector<ConeConstraint>& constraints() const { return constraints_; }

  /// Linear objective to minimize: objective . x + objective_offset.
  RealVector objective;
  double objective_offset = 0.0;

  /// Variables must be declared before any expression referencing them is
  /// built, so that expressions have the final length.
  const VariableSlice& add_scalar(const std::string& name) {
    return add_slice(name, VariableKind::kScalar, 1, 1);
  }
  const VariableSlice& add_complex_vector(const std::string& name, int n) {
    return add_slice(name, VariableKind::kComplexVector, 2 * n, n);
  }
  const VariableSlice& add_hermitian(const std::string& name, int n) {
    return add_slice(name, VariableKind::kHermitian, n * n, n);
  }

  bool has_variable(const std::string& name) const {
    for (const auto& v : variables_)
      if (v.name == name) return true;
    return false;
  }

  const VariableSlice& variable(const std::string& name) const {
    for (const auto& v : variables_)
      if (v.name == name) return v;
    throw InvalidArgument("ConicProblemIR: unknown variable '" + name + "'");
  }

  // -- expressions over declared variables ---------------------------------

  LinearExpr scalar(const std::string& name) const {
    const auto& v = variable(name);
    if (v.kind != VariableKind::kScalar)
      throw InvalidArgument("scalar(): '" + name + "' is not a scalar");
    LinearExpr e = LinearExpr::zero(n_vars_);
    e.coef(v.offset) = 1.0;
    return e;
  }

  LinearExpr constant(double c) const {
    LinearExpr e = LinearExpr::zero(n_vars_);
    e.constant = c;
    return e;
  }

  /// tr(V C) for a Hermitian variable V and constant Hermitian C.
  LinearExpr trace_with(const std::string& name, const HermitianMatrix& c) const {
    const auto& v = variable(name);
    if (v.kind != VariableKind::kHermitian)
      throw InvalidArgument("trace_with(): '" + name + "' is not Hermitian");
    LinearExpr e = LinearExpr::zero(n_vars_);
    e.coef.segment(v.offset, v.size) = herm_vec(c);
    return e;
  }

  /// Re(a^H v) for a complex vector variable v.
  LinearExpr real_inner(const ComplexVector& a, const std::string& name) const {
    const auto& v = variable(name);
    if (v.kind != VariableKind::kComplexVector || a.size() != v.dim)
      throw InvalidArgument("real_inner(): bad operand for '" + name + "'");
    LinearExpr e = LinearExpr::zero(n_vars_);
    for (int i = 0; i < v.dim; ++i) {
      e.coef(v.offset + 2 * i) = a(i).real();
      e.coef(v.offset + 2 * i + 1) = a(i).imag();
    }
    return e;
  }

  /// The real coordinates of a variable (herm_vec coordinates for Hermitian
  /// variables, interleaved parts for complex vectors).
  VectorExpr coords(const std::string& name) const {
    const auto& v = variable(name);
    VectorExpr e = VectorExpr::zero(v.size, n_vars_);
    for (int i = 0; i < v.size; ++i) e.coef(i, v.offset + i) = 1.0;
    return e;
  }

  /// Real coordinates of M v for a constant complex matrix M and complex
  /// vector variable v, interleaved.
  VectorExpr complex_product(const ComplexMatrix& m, const std::string& name) const {
    const auto& v = variable(name);
    if (v.kind != VariableKind::kComplexVector || m.cols() != v.dim)
      throw InvalidArgument("complex_product(): bad operand for '" + name + "'");
    VectorExpr e = VectorExpr::zero(2 * static_cast<int>(m.rows()), n_vars_);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < v.dim; ++j) {
        const Complex c = m(i, j);
        e.coef(2 * i, v.offset + 2 * j) = c.real();
        e.coef(2 * i, v.offset + 2 * j + 1) = -c.imag();
        e.coef(2 * i + 1, v.offset + 2 * j) = c.imag();
        e.coef(2 * i + 1, v.offset + 2 * j + 1) = c.real();
      }
    }
    return e;
  }

  /// The Hermitian matrix variable as a matrix expression.
  MatrixExpr hermitian(const std::string& name) const {
    const auto& v = variable(name);
    if (v.kind != VariableKind::kHermitian)
      throw InvalidArgument("hermitian(): '" + name + "' is not Hermitian");
    const int n = v.dim;
    MatrixExpr e = MatrixExpr::zero(n, n, n_vars_);
    auto at = [&](int k, int i, int j) -> Complex& {
      return e.coef(Eigen::Index{j} * n + i, v.offset + k);
    };
    for (int i = 0; i < n; ++i) at(i, i, i) = 1.0;
    int k = n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        at(k, i, j) = 1.0 / kSqrt2;
        at(k, j, i) = 1.0 / kSqrt2;
        at(k + 1, i, j) = Complex(0.0, 1.0 / kSqrt2);
        at(k + 1, j, i) = Complex(0.0, -1.0 / kSqrt2);
        k += 2;
      }
    }
    return e;
  }

  /// The complex vector variable as an N x 1 matrix expression.
  MatrixExpr column(const std::string& name) const {
    const auto& v = variable(name);
    if (v.kind != VariableKind::kComplexVector)
      throw InvalidArgument("column(): '" + name + "' is not a complex vector");
    MatrixExpr e = MatrixExpr::zero(v.dim, 1, n_vars_);
    for (int i = 0; i < v.dim; ++i) {
      e.coef(i, v.offset + 2 * i) = 1.0;
      e.coef(i, v.offset + 2 * i + 1) = Complex(0.0, 1.0);
    }
    return e;
  }

  // -- constraints ---------------------------------------------------------

  void add_equality(const LinearExpr& e, std::string label = {}) {
    add_rows(ConeKind::kZero, 0, std::move(label), e.coef.transpose(),
             RealVector::Constant(1, e.constant));
  }

  /// e >= 0.
  void add_nonnegative(const LinearExpr& e, std::string label = {}) {
    add_rows(ConeKind::kNonnegative, 0, std::move(label), e.coef.transpose(),
             RealVector::Constant(1, e.constant));
  }

  /// t >= ||v||_2.
  void add_second_order(const LinearExpr& t, const VectorExpr& v,
                        std::string label = {}) {
    RealMatrix m(v.rows() + 1, n_vars_);
    m.row(0) = t.coef.transpose();
    m.bottomRows(v.rows()) = v.coef;
    RealVector g(v.rows() + 1);
    g(0) = t.constant;
    g.tail(v.rows()) = v.constant;
    add_rows(ConeKind::kSecondOrder, 0, std::move(label), m, g);
  }

  /// Hermitian matrix expression is PSD; stated on the real embedding.
  void add_hermitian_psd(const MatrixExpr& e, std::string label = {}) {
    if (e.rows != e.cols) throw InvalidArgument("add_hermitian_psd: not square");
    for (int k = 0; k < e.n_vars(); ++k) {
      if (!e.coef.col(k).isZero(0.0) && !is_hermitian(e.term(k), 1e-12))
        throw InvalidArgument("add_hermitian_psd: non-Hermitian coefficient");
    }
    if (!is_hermitian(e.constant, 1e-12))
      throw InvalidArgument("add_hermitian_psd: non-Hermitian constant");
    const int order = 2 * e.rows;
    RealMatrix m = RealMatrix::Zero(svec_size(order), n_vars_);
    for (int k = 0; k < e.n_vars(); ++k) {
      if (e.coef.col(k).isZero(0.0)) continue;
      m.col(k) = svec(complex_embed(e.term(k)));
    }
    add_rows(ConeKind::kPsd, order, std::move(label), m,
             svec(complex_embed(e.constant)));
  }

  /// Direct real symmetric PSD constraint (svec rows).
  void add_real_psd(const RealMatrix& svec_rows, const RealVector& svec_offset,
                    std::string label = {}) {
    add_rows(ConeKind::kPsd, svec_order(svec_offset.size()), std::move(label),
             svec_rows, svec_offset);
  }

  void add_constraint(ConeConstraint c) {
    if (c.map.cols() != n_vars_ || c.map.rows() != c.offset.size())
      throw InvalidArgument("add_constraint: dimension mismatch");
    constraints_.push_back(std::move(c));
  }

  // -- evaluation ----------------------------------------------------------

  double objective_value(const RealVector& x) const {
    return objective.dot(x) + objective_offset;
  }

  RealVector slice_value(const RealVector& x, const std::string& name) const {
    const auto& v = variable(name);
    return x.segment(v.offset, v.size);
  }
  double scalar_value(const RealVector& x, const std::string& name) const {
    return x(variable(name).offset);
  }
  HermitianMatrix hermitian_value(const RealVector& x, const std::string& name) const {
    return herm_unvec(slice_value(x, name));
  }
  ComplexVector complex_value(const RealVector& x, const std::string& name) const {
    const auto& v = variable(name);
    ComplexVector c(v.dim);
    for (int i = 0; i < v.dim; ++i)
      c(i) = Complex(x(v.offset + 2 * i), x(v.offset + 2 * i + 1));
    return c;
  }

  /// Largest violation of any cone membership at x (0 when feasible).
  double max_violation(const RealVector& x) const {
    double worst = 0.0;
    for (const auto& c : constraints_) worst = std::max(worst, violation(c, x));
    return worst;
  }

  static double violation(const ConeConstraint& c, const RealVector& x) {
    const RealVector v = c.map * x + c.offset;
    switch (c.kind) {
      case ConeKind::kZero: return v.cwiseAbs().maxCoeff();
      case ConeKind::kNonnegative: return std::max(0.0, -v.minCoeff());
      case ConeKind::kSecondOrder:
        return std::max(0.0, v.tail(v.size() - 1).norm() - v(0));
      case ConeKind::kPsd: {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(smat(v), Eigen::EigenvaluesOnly);
        return std::max(0.0, -es.eigenvalues().minCoeff());
      }
    }
    return 0.0;
  }

  void validate() const {
    if (objective.size() != n_vars_)
      throw InvalidArgument("ConicProblemIR: objective length mismatch");
    for (const auto& c : constraints_) {
      if (c.map.cols() != n_vars_ || c.map.rows() != c.offset.size())
        throw InvalidArgument("ConicProblemIR: constraint '" + c.label +
                              "' has inconsistent dimensions");
      if (c.kind == ConeKind::kPsd && svec_size(c.psd_order) != c.dim())
        throw InvalidArgument("ConicProblemIR: PSD block '" + c.label +
                              "' has wrong svec length");
      if (c.kind == ConeKind::kSecondOrder && c.dim() < 1)
        throw InvalidArgument("ConicProblemIR: empty second-order cone");
    }
  }

 private:
  const VariableSlice& add_slice(const std::string& name, VariableKind kind,
                                 int size, int dim) {
    if (!constraints_.empty())
      throw InvalidArgument("ConicProblemIR: declare variables before constraints");
    if (has_variable(name))
      throw InvalidArgument("ConicProblemIR: duplicate variable '" + name + "'");
    variables_.push_back({name, kind, n_vars_, size, dim});
    n_vars_ += size;
    RealVector grown = RealVector::Zero(n_vars_);
    if (objective.size() > 0) grown.head(objective.size()) = objective;
    objective = grown;
    return variables_.back();
  }

  void add_rows(ConeKind kind, int order, std::string label, const RealMatrix& m,
                const RealVector& g) {
    if (m.cols() != n_vars_ || m.rows() != g.size())
      throw InvalidArgument("ConicProblemIR: expression built before all "
                            "variables were declared");
    ConeConstraint c;
    c.kind = kind;
    c.psd_order = order;
    c.label = std::move(label);
    c.map = m.sparseView(1.0, 1e-300);
    c.offset = g;
    constraints_.push_back(std::move(c));
  }

  int n_vars_ = 0;
  std::vector<VariableSlice> variables_;
  std::vector<ConeConstraint> constraints_;
};

// ---------------------------------------------------------------------------
// Text dump
// ---------------------------------------------------------------------------
//
//   drab-ir 1
//   vars <n_vars>
//   var <name> <scalar|cvector|hermitian> <offset> <size> <dim>
//   objective <offset> <col>:<coef> ...
//   <zero|nonneg|soc|psd> <dim> <order> <label> | <row>:<col>:<coef> ... | <row>:<offset> ...
//
// One constraint per line; labels contain no whitespace. Numbers are written
// with 17 significant digits so a dump reads back bit-exactly.

inline const char* to_string(VariableKind k) {
  switch (k) {
    case VariableKind::kScalar: return "scalar";
    case VariableKind::kComplexVector: return "cvector";
    case VariableKind::kHermitian: return "hermitian";
  }
  return "?";
}

inline void write_ir(std::ostream& os, const ConicProblemIR& ir) {
  const auto old_precision = os.precision(17);
  os << "drab-ir 1\n";
  os << "vars " << ir.n_vars() << "\n";
  for (const auto& v : ir.variables()) {
    os << "var " << v.name << " " << to_string(v.kind) << " " << v.offset << " "
       << v.size << " " << v.dim << "\n";
  }
  os << "objective " << ir.objective_offset;
  for (int k = 0; k < ir.n_vars(); ++k) {
    if (ir.objective(k) != 0.0) os << " " << k << ":" << ir.objective(k);
  }
  os << "\n";
  for (const auto& c : ir.constraints()) {
    os << to_string(c.kind) << " " << c.dim() << " " << c.psd_order << " "
       << (c.label.empty() ? "-" : c.label) << " |";
    for (int r = 0; r < c.map.outerSize(); ++r) {
      for (decltype(c.map)::InnerIterator it(c.map, r); it; ++it) {
        os << " " << it.row() << ":" << it.col() << ":" << it.value();
      }
    }
    os << " |";
    for (Eigen::Index r = 0; r < c.offset.size(); ++r) {
      if (c.offset(r) != 0.0) os << " " << r << ":" << c.offset(r);
    }
    os << "\n";
  }
  os.precision(old_precision);
}

inline ConicProblemIR read_ir(std::istream& is) {
  auto fail = [](const std::string& why) -> void {
    throw InvalidArgument("read_ir: " + why);
  };
  std::string line;
  std::string word;
  int version = 0;
  if (!std::getline(is, line)) fail("empty input");
  {
    std::istringstream ls(line);
    ls >> word >> version;
    if (word != "drab-ir" || version != 1) fail("bad header");
  }
  int n_vars = 0;
  if (!std::getline(is, line)) fail("missing vars line");
  {
    std::istringstream ls(line);
    ls >> word >> n_vars;
    if (word != "vars") fail("expected 'vars'");
  }
  ConicProblemIR ir;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    ls >> word;
    if (word == "var") {
      std::string name, kind;
      int offset = 0, size = 0, dim = 0;
      ls >> name >> kind >> offset >> size >> dim;
      if (kind == "scalar") ir.add_scalar(name);
      else if (kind == "cvector") ir.add_complex_vector(name, dim);
      else if (kind == "hermitian") ir.add_hermitian(name, dim);
      else fail("unknown variable kind '" + kind + "'");
      if (ir.variable(name).offset != offset) fail("variable offsets out of order");
    } else if (word == "objective") {
      if (ir.n_vars() != n_vars) fail("variable table does not cover vars");
      ls >> ir.objective_offset;
      std::string tok;
      while (ls >> tok) {
        const auto colon = tok.find(':');
        ir.objective(std::stoi(tok.substr(0, colon))) = std::stod(tok.substr(colon + 1));
      }
    } else {
      ConeConstraint c;
      if (word == "zero") c.kind = ConeKind::kZero;
      else if (word == "nonneg") c.kind = ConeKind::kNonnegative;
      else if (word == "soc") c.kind = ConeKind::kSecondOrder;
      else if (word == "psd") c.kind = ConeKind::kPsd;
      else fail("unknown line '" + word + "'");
      int dim = 0;
      std::string bar;
      ls >> dim >> c.psd_order >> c.label >> bar;
      if (c.label == "-") c.label.clear();
      std::vector<Eigen::Triplet<double>> trips;
      std::string tok;
      while (ls >> tok && tok != "|") {
        const auto a = tok.find(':');
        const auto b = tok.find(':', a + 1);
        trips.emplace_back(std::stoi(tok.substr(0, a)),
                           std::stoi(tok.substr(a + 1, b - a - 1)),
                           std::stod(tok.substr(b + 1)));
      }
      c.map.resize(dim, ir.n_vars());
      c.map.setFromTriplets(trips.begin(), trips.end());
      c.offset = RealVector::Zero(dim);
      while (ls >> tok) {
        const auto a = tok.find(':');
        c.offset(std::stoi(tok.substr(0, a))) = std::stod(tok.substr(a + 1));
      }
      ir.add_constraint(std::move(c));
    }
  }
  ir.validate();
  return ir;
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalLimit: return "numerical_limit";
  }
  return "?";
}

struct ConicSolution {
  RealVector x;
  SolveStatus status = SolveStatus::kNumericalLimit;
  double objective_value = 0.0;
  double solver_tolerance = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

}  // namespace drab

#endif  // DRAB_HERMITIAN_CONIC_HPP_
