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

// Conic relaxations of the distributionally robust beamforming problem.
//
// Every builder relaxes w w^H to a PSD matrix W and emits a ConicProblemIR
// with the following named variables:
//
//   W, X, Z     Hermitian N x N (Xp as well for the D1' build)
//   xv, x0      vector and scalar multipliers of the steering-vector dual
//   tau1, tau2  S-procedure multipliers of the norm shell (both <= 0)
//   t_*         epigraph scalars of the norm / lambda_max terms
//
// Constraint labels are stable ("moment", "lmi", "W_psd", ...) so callers
// can evaluate individual blocks.

#ifndef DRAB_DRO_BUILDERS_HPP_
#define DRAB_DRO_BUILDERS_HPP_

#include <cmath>
#include <map>
#include <string>

#include "drab/hermitian_conic.hpp"
#include "drab/linalg.hpp"
#include "drab/moments.hpp"

namespace drab {

enum class Family { kMainD1D2, kAltD2Prime, kAltD2PP, kAltD1Prime };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::kMainD1D2: return "main_d1_d2";
    case Family::kAltD2Prime: return "alt_d2_prime";
    case Family::kAltD2PP: return "alt_d2_pp";
    case Family::kAltD1Prime: return "alt_d1_prime";
  }
  return "?";
}

inline const char* to_string(D1Support s) {
  return s == D1Support::kTraceBall ? "trace_ball" : "frobenius_ball";
}

inline const char* to_string(D2Support s) {
  return s == D2Support::kNormShell ? "norm_shell" : "unbounded";
}

struct FormulationKind {
  Family family = Family::kMainD1D2;
  D1Support d1_support = D1Support::kFrobeniusBall;
  D2Support z2_support = D2Support::kNormShell;
};

/// Solved values of every named variable of a relaxation.
struct DualVariables {
  HermitianMatrix W;
  HermitianMatrix X;
  HermitianMatrix Xp;  // D1' only
  HermitianMatrix Z;
  ComplexVector xv;
  double x0 = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  std::map<std::string, double> epigraphs;
};

namespace builder_detail {

inline HermitianMatrix identity(int n) { return HermitianMatrix::Identity(n, n); }

// Declares the variables shared by every build.
inline void declare_common(ConicProblemIR& ir, int n, bool shell) {
  ir.add_hermitian("W", n);
  ir.add_hermitian("X", n);
  ir.add_hermitian("Z", n);
  ir.add_complex_vector("xv", n);
  ir.add_scalar("x0");
  if (shell) {
    ir.add_scalar("tau1");
    ir.add_scalar("tau2");
  }
}

// tau1 (1 + Delta) N - tau2 (1 - Delta) N, and the matching identity shift
// (tau1 - tau2) I, both zero without the shell.
inline LinearExpr shell_corner(const ConicProblemIR& ir, bool shell, double delta, int n) {
  if (!shell) return ir.constant(0.0);
  return (1.0 + delta) * n * ir.scalar("tau1") - (1.0 - delta) * n * ir.scalar("tau2");
}

inline MatrixExpr shell_shift(const ConicProblemIR& ir, bool shell, int n) {
  if (!shell) return MatrixExpr::zero(n, n, ir.n_vars());
  return scale_matrix(ir.scalar("tau1") - ir.scalar("tau2"), identity(n));
}

inline void add_shell_signs(ConicProblemIR& ir, bool shell) {
  if (!shell) return;
  ir.add_nonnegative(-ir.scalar("tau1"), "tau1_nonpos");
  ir.add_nonnegative(-ir.scalar("tau2"), "tau2_nonpos");
}

inline MatrixExpr scalar_block(const LinearExpr& e, int n_vars) {
  MatrixExpr m = MatrixExpr::zero(1, 1, n_vars);
  for (int k = 0; k < n_vars; ++k) m.coef(0, k) = e.coef(k);
  m.constant(0, 0) = e.constant;
  return m;
}

// Objective pieces of the D1 dual: rho1 ||X||_F + rho2 sigma(W + X) - tr(X S0),
// where sigma is ||.||_F (Frobenius ball) or lambda_max (trace ball).
inline void add_d1_objective(ConicProblemIR& ir, const D1Params& d1) {
  const int n = d1.dim();
  ir.add_second_order(ir.scalar("t_X"), ir.coords("X"), "t_X_soc");
  if (d1.support == D1Support::kFrobeniusBall) {
    ir.add_second_order(ir.scalar("t_WX"), ir.coords("W") + ir.coords("X"), "t_WX_soc");
  } else {
    ir.add_hermitian_psd(scale_matrix(ir.scalar("t_WX"), identity(n)) - ir.hermitian("W") -
                             ir.hermitian("X"),
                         "t_WX_lmax");
  }
  LinearExpr obj = d1.rho1 * ir.scalar("t_X") + d1.rho2 * ir.scalar("t_WX") -
                   ir.trace_with("X", d1.S0);
  ir.objective = obj.coef;
  ir.objective_offset = obj.constant;
}

// x0 + Re(a0^H xv) - gamma1 ||xv|| - tr(Z((1+gamma2) Sigma + a0 a0^H)) >= 1,
// Z >= 0, and the (N+1) x (N+1) LMI.
inline void add_d2_block(ConicProblemIR& ir, const D2Params& d2) {
  const int n = d2.dim();
  const bool shell = d2.support == D2Support::kNormShell;
  const HermitianMatrix m = (1.0 + d2.gamma2) * d2.Sigma + outer(d2.a0, d2.a0);
  ir.add_second_order(ir.scalar("t_xv"), ir.coords("xv"), "t_xv_soc");
  ir.add_nonnegative(ir.scalar("x0") + ir.real_inner(d2.a0, "xv") -
                         d2.gamma1 * ir.scalar("t_xv") - ir.trace_with("Z", m) - 1.0,
                     "moment");
  ir.add_hermitian_psd(ir.hermitian("Z"), "Z_psd");
  const MatrixExpr off = -0.5 * ir.column("xv");
  const MatrixExpr lmi = block_matrix(
      {{ir.hermitian("W") + ir.hermitian("Z") - shell_shift(ir, shell, n), off},
       {off.adjoint(),
        scalar_block(-ir.scalar("x0") + shell_corner(ir, shell, d2.Delta, n), ir.n_vars())}});
  ir.add_hermitian_psd(lmi, "lmi");
  add_shell_signs(ir, shell);
}

// Shared skeleton of the D2' and D2'' builds.
inline ConicProblemIR build_d2_alternative(const D1Params& d1, const D2PrimeParams& p,
                                           bool double_prime, D2Support support) {
  d1.validate();
  if (d1.dim() != p.dim())
    throw InvalidArgument("builder: D1 and D2 dimensions differ");
  const int n = p.dim();
  const bool shell = support == D2Support::kNormShell;
  ConicProblemIR ir;
  declare_common(ir, n, shell);
  ir.add_scalar("t_X");
  ir.add_scalar("t_WX");
  ir.add_scalar("t_Qxv");
  if (!double_prime) ir.add_scalar("t_Z");

  add_d1_objective(ir, d1);
  ir.add_hermitian_psd(ir.hermitian("W"), "W_psd");

  const HermitianMatrix qh = psd_sqrt(p.Q);
  ir.add_second_order(ir.scalar("t_Qxv"), ir.complex_product(qh, "xv"), "t_Qxv_soc");
  LinearExpr lhs = -ir.scalar("x0") + 2.0 * ir.real_inner(p.abar, "xv") -
                   ir.trace_with("Z", p.Sigmabar - outer(p.abar, p.abar)) - 1.0 -
                   2.0 * std::sqrt(p.gamma1) * ir.scalar("t_Qxv");
  if (double_prime) {
    lhs -= p.gamma2 * ir.trace_with("Z", p.Sigmabar);
    ir.add_hermitian_psd(ir.hermitian("Z"), "Z_psd");
  } else {
    ir.add_second_order(ir.scalar("t_Z"), ir.coords("Z"), "t_Z_soc");
    lhs -= p.gamma2 * ir.scalar("t_Z");
  }
  ir.add_nonnegative(lhs, "moment");

  // Z abar as an N x 1 expression.
  const MatrixExpr z = ir.hermitian("Z");
  MatrixExpr za = MatrixExpr::zero(n, 1, ir.n_vars());
  for (int k = 0; k < ir.n_vars(); ++k) {
    if (!z.coef.col(k).isZero(0.0)) za.coef.col(k) = z.term(k) * p.abar;
  }
  const MatrixExpr upper = -1.0 * za - ir.column("xv");
  const MatrixExpr lmi = block_matrix(
      {{ir.hermitian("W") + ir.hermitian("Z") - shell_shift(ir, shell, n), upper},
       {upper.adjoint(),
        scalar_block(ir.scalar("x0") + shell_corner(ir, shell, p.Delta, n), ir.n_vars())}});
  ir.add_hermitian_psd(lmi, "lmi");
  add_shell_signs(ir, shell);
  ir.validate();
  return ir;
}

}  // namespace builder_detail

/// LMI relaxation of the (D1, D2) problem.
inline ConicProblemIR build_main_relaxation(const D1Params& d1, const D2Params& d2) {
  d1.validate();
  d2.validate();
  if (d1.dim() != d2.dim())
    throw InvalidArgument("build_main_relaxation: D1 and D2 dimensions differ");
  const bool shell = d2.support == D2Support::kNormShell;
  ConicProblemIR ir;
  builder_detail::declare_common(ir, d1.dim(), shell);
  ir.add_scalar("t_X");
  ir.add_scalar("t_WX");
  ir.add_scalar("t_xv");
  builder_detail::add_d1_objective(ir, d1);
  ir.add_hermitian_psd(ir.hermitian("W"), "W_psd");
  builder_detail::add_d2_block(ir, d2);
  ir.validate();
  return ir;
}

/// (D1, D2'): Z is sign-free and the constraint carries
/// 2 sqrt(gamma1) ||Q^{1/2} xv|| + gamma2 ||Z||_F.
inline ConicProblemIR build_d2prime_relaxation(const D1Params& d1, const D2PrimeParams& p,
                                               D2Support support = D2Support::kNormShell) {
  p.validate();
  return builder_detail::build_d2_alternative(d1, p, false, support);
}

/// (D1, D2''): Z >= 0 and the gamma2 term is gamma2 tr(Sigmabar Z).
inline ConicProblemIR build_d2pp_relaxation(const D1Params& d1, const D2PPParams& p,
                                            D2Support support = D2Support::kNormShell) {
  p.validate();
  return builder_detail::build_d2_alternative(d1, p, true, support);
}

/// (D1', D2): objective rho2 ||W + X - Xp||_F
/// + tr(((1 + rho1) Xp - (1 - rho1) X)(S0 + eps I)) with X, Xp >= 0.
inline ConicProblemIR build_d1prime_relaxation(const D1PrimeParams& d1p, const D2Params& d2) {
  d1p.validate();
  d2.validate();
  if (d1p.dim() != d2.dim())
    throw InvalidArgument("build_d1prime_relaxation: D1' and D2 dimensions differ");
  const int n = d1p.dim();
  const bool shell = d2.support == D2Support::kNormShell;
  ConicProblemIR ir;
  builder_detail::declare_common(ir, n, shell);
  ir.add_hermitian("Xp", n);
  ir.add_scalar("t_WXXp");
  ir.add_scalar("t_xv");

  const HermitianMatrix loaded = d1p.S0 + d1p.eps * builder_detail::identity(n);
  ir.add_second_order(ir.scalar("t_WXXp"),
                      ir.coords("W") + ir.coords("X") - ir.coords("Xp"), "t_WXXp_soc");
  const LinearExpr obj = d1p.rho2 * ir.scalar("t_WXXp") +
                         (1.0 + d1p.rho1) * ir.trace_with("Xp", loaded) -
                         (1.0 - d1p.rho1) * ir.trace_with("X", loaded);
  ir.objective = obj.coef;
  ir.objective_offset = obj.constant;
  ir.add_hermitian_psd(ir.hermitian("W"), "W_psd");
  ir.add_hermitian_psd(ir.hermitian("X"), "X_psd");
  ir.add_hermitian_psd(ir.hermitian("Xp"), "Xp_psd");
  builder_detail::add_d2_block(ir, d2);
  ir.validate();
  return ir;
}

/// Adds alpha (tr W - tr(W W_k) / ||W_k||_F) to the objective.
inline ConicProblemIR build_penalty_problem(const ConicProblemIR& base,
                                            const HermitianMatrix& Wk, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("build_penalty_problem: alpha must be >= 0");
  const double norm = Wk.norm();
  if (!(norm > 0.0)) throw InvalidArgument("build_penalty_problem: W_k is zero");
  const auto& w = base.variable("W");
  if (Wk.rows() != w.dim) throw InvalidArgument("build_penalty_problem: W_k size mismatch");
  ConicProblemIR out = base;
  const HermitianMatrix dir =
      HermitianMatrix::Identity(w.dim, w.dim) - hermitian_part(Wk) / norm;
  out.objective.segment(w.offset, w.size) += alpha * herm_vec(dir);
  return out;
}

/// rho2 ||A||_F.
inline double support_value_frobenius(const HermitianMatrix& A, double rho2) {
  require_hermitian(A, "support_value_frobenius");
  return rho2 * A.norm();
}

/// rho2 lambda_max(A), without clamping at zero.
inline double support_value_trace(const HermitianMatrix& A, double rho2) {
  require_hermitian(A, "support_value_trace");
  return rho2 * lambda_max(A);
}

/// Reads every named variable of a solved relaxation.
inline DualVariables extract_duals(const ConicProblemIR& ir, const RealVector& x) {
  DualVariables d;
  d.W = ir.hermitian_value(x, "W");
  d.X = ir.hermitian_value(x, "X");
  if (ir.has_variable("Xp")) d.Xp = ir.hermitian_value(x, "Xp");
  d.Z = ir.hermitian_value(x, "Z");
  d.xv = ir.complex_value(x, "xv");
  d.x0 = ir.scalar_value(x, "x0");
  if (ir.has_variable("tau1")) {
    d.tau1 = ir.scalar_value(x, "tau1");
    d.tau2 = ir.scalar_value(x, "tau2");
  }
  for (const auto& v : ir.variables()) {
    if (v.name.rfind("t_", 0) == 0) d.epigraphs[v.name] = x(v.offset);
  }
  return d;
}

/// Copy of x with the W slice replaced by herm_vec(w w^H).
inline RealVector with_rank_one(const ConicProblemIR& ir, const RealVector& x,
                                const ComplexVector& w) {
  RealVector out = x;
  const auto& v = ir.variable("W");
  out.segment(v.offset, v.size) = herm_vec(hermitian_part(outer(w, w)));
  return out;
}

/// Value of the (D1-side) objective terms with exact norms, i.e. the
/// objective with every epigraph replaced by the norm it bounds.
inline double evaluate_d1_dual(const D1Params& d1, const DualVariables& d) {
  const double sigma = d1.support == D1Support::kFrobeniusBall
                           ? support_value_frobenius(hermitian_part(d.W + d.X), d1.rho2)
                           : support_value_trace(hermitian_part(d.W + d.X), d1.rho2);
  return d1.rho1 * d.X.norm() + sigma - trace_inner(d.X, d1.S0);
}

/// Left side of the (D1, D2) moment constraint with the exact norm.
inline double evaluate_d2_dual(const D2Params& d2, const DualVariables& d) {
  const HermitianMatrix m = (1.0 + d2.gamma2) * d2.Sigma + outer(d2.a0, d2.a0);
  return d.x0 + d2.a0.dot(d.xv).real() - d2.gamma1 * d.xv.norm() - trace_inner(d.Z, m);
}

}  // namespace drab

#endif  // DRAB_DRO_BUILDERS_HPP_
