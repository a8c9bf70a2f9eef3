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

// Rank-one certificate tr(W) - ||W||_F and the penalty iteration that drives
// a relaxed beamforming matrix W to rank one.

#ifndef DRAB_RANK_ONE_HPP_
#define DRAB_RANK_ONE_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "drab/conic_ipm.hpp"
#include "drab/dro_builders.hpp"
#include "drab/hermitian_conic.hpp"
#include "drab/linalg.hpp"
#include "json.hpp"

namespace drab {

/// tr(W) - ||W||_F. Zero exactly when a nonzero PSD W has rank one.
inline double rank_gap(const HermitianMatrix& W) { return real_trace(W) - W.norm(); }

/// sqrt(lambda_1) u_1 with the largest-modulus entry made real positive.
inline ComplexVector extract_w(const HermitianMatrix& W) {
  if (W.size() == 0 || W.norm() == 0.0) throw InvalidArgument("extract_w: zero matrix");
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(hermitian_part(W));
  if (es.info() != Eigen::Success) throw SingularMatrix("extract_w: eigensolver failed");
  const Eigen::Index n = W.rows();
  const double lambda1 = es.eigenvalues()(n - 1);
  if (!(lambda1 > 0.0)) throw InvalidArgument("extract_w: no positive eigenvalue");
  ComplexVector w = std::sqrt(lambda1) * es.eigenvectors().col(n - 1);
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  w *= std::conj(w(imax)) / std::abs(w(imax));
  w(imax) = std::abs(w(imax));
  return w;
}

/// lambda_2 / lambda_1; 0 for 1 x 1 matrices.
inline double eigen_ratio(const HermitianMatrix& W) {
  if (W.rows() < 2) return 0.0;
  const RealVector ev = hermitian_eigenvalues(hermitian_part(W));
  const Eigen::Index n = ev.size();
  if (!(ev(n - 1) > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, ev(n - 2)) / ev(n - 1);
}

/// f_{2,k}(W) = tr(W) - tr(W W_k) / ||W_k||_F.
inline double penalty_value(const HermitianMatrix& W, const HermitianMatrix& Wk) {
  return real_trace(W) - trace_inner(hermitian_part(W), hermitian_part(Wk)) / Wk.norm();
}

struct RankOneDiagnostics {
  std::vector<double> objective_sequence;  // v_1, v_2, ... (penalized optimal values)
  std::vector<double> penalty_sequence;    // f_{2,k}(W_{k+1}), also the stopping quantity
  int iterations = 0;                      // penalized solves
  double relaxation_value = 0.0;
  double final_rank_gap = 0.0;
  double eigen_ratio = 0.0;
  bool eigen_ratio_flag = false;  // eigen_ratio > 1e-3 at termination
  double feasibility_violation = 0.0;
  bool feasible = false;
  double solver_tolerance = 0.0;
  int solver_iterations = 0;
  double seconds = 0.0;
};

struct BeamformerResult {
  ComplexVector w;
  HermitianMatrix W;
  RankOneDiagnostics diagnostics;
  FormulationKind formulation;
  DualVariables duals;
};

struct Algorithm1Settings {
  double alpha = 1e3;
  double eta = 1e-6;
  int max_iter = 50;
  double solver_tol = 1e-8;
  double feasibility_tol = 1e-6;
};

class Algorithm1Error : public std::runtime_error {
 public:
  enum class Kind { kSolverFailure, kMaxIterations };

  Algorithm1Error(Kind kind, const std::string& what, RankOneDiagnostics diagnostics)
      : std::runtime_error(what), kind_(kind), diagnostics_(std::move(diagnostics)) {}

  Kind kind() const { return kind_; }
  const RankOneDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  Kind kind_;
  RankOneDiagnostics diagnostics_;
};

namespace rank_one_detail {

// Raises every epigraph variable t_* to the smallest value its cone allows,
// holding everything else fixed.
inline void lift_epigraphs(const ConicProblemIR& ir, RealVector& x) {
  for (const auto& c : ir.constraints()) {
    if (c.kind == ConeKind::kSecondOrder) {
      if (c.map.outerIndexPtr()[1] - c.map.outerIndexPtr()[0] != 1) continue;
      const int col = c.map.innerIndexPtr()[0];
      const double coef = c.map.valuePtr()[0];
      if (!(coef > 0.0)) continue;
      const RealVector v = c.map * x + c.offset;
      const double need = v.tail(v.size() - 1).norm();
      if (v(0) < need) x(col) += (need - v(0)) / coef;
    } else if (c.label == "t_WX_lmax") {
      const auto& t = ir.variable("t_WX");
      const HermitianMatrix s =
          hermitian_part(ir.hermitian_value(x, "W") + ir.hermitian_value(x, "X"));
      x(t.offset) = std::max(x(t.offset), lambda_max(s));
    }
  }
}

inline void finish(const ConicProblemIR& base, const RealVector& x,
                   const Algorithm1Settings& settings, BeamformerResult& out) {
  auto& diag = out.diagnostics;
  out.duals = extract_duals(base, x);
  out.W = out.duals.W;
  out.w = extract_w(out.W);
  diag.final_rank_gap = rank_gap(out.W);
  diag.eigen_ratio = eigen_ratio(out.W);
  diag.eigen_ratio_flag = diag.eigen_ratio > 1e-3;
  RealVector xr = with_rank_one(base, x, out.w);
  lift_epigraphs(base, xr);
  diag.feasibility_violation = base.max_violation(xr);
  diag.feasible = diag.feasibility_violation <= settings.feasibility_tol;
}

}  // namespace rank_one_detail

/// Penalty iteration on an already-built relaxation. Throws Algorithm1Error
/// on solver failure or when max_iter penalized solves do not satisfy the
/// stopping rule; the error carries the diagnostics gathered so far.
inline BeamformerResult algorithm1(const ConicProblemIR& relaxation,
                                   const FormulationKind& formulation,
                                   const Algorithm1Settings& settings = {}) {
  if (!(settings.alpha > 0.0)) throw InvalidArgument("algorithm1: alpha must be > 0");
  if (!(settings.eta > 0.0)) throw InvalidArgument("algorithm1: eta must be > 0");
  if (settings.max_iter < 1) throw InvalidArgument("algorithm1: max_iter must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  BeamformerResult out;
  out.formulation = formulation;
  auto& diag = out.diagnostics;
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  auto fail = [&](Algorithm1Error::Kind kind, const std::string& msg) {
    diag.seconds = elapsed();
    throw Algorithm1Error(kind, msg, diag);
  };

  ConicSolution sol = solve(relaxation, settings.solver_tol);
  diag.solver_iterations += sol.iterations;
  diag.solver_tolerance = sol.solver_tolerance;
  if (!sol.optimal())
    fail(Algorithm1Error::Kind::kSolverFailure,
         std::string("algorithm1: relaxation solve ended ") + to_string(sol.status));
  diag.relaxation_value = sol.objective_value;
  HermitianMatrix wk = relaxation.hermitian_value(sol.x, "W");
  RealVector x = sol.x;

  if (rank_gap(wk) > settings.eta) {
    bool done = false;
    for (int k = 0; k < settings.max_iter && !done; ++k) {
      if (!(wk.norm() > 0.0)) fail(Algorithm1Error::Kind::kSolverFailure, "algorithm1: W_k = 0");
      const ConicProblemIR pen = build_penalty_problem(relaxation, wk, settings.alpha);
      sol = solve(pen, settings.solver_tol);
      diag.solver_iterations += sol.iterations;
      diag.solver_tolerance = std::max(diag.solver_tolerance, sol.solver_tolerance);
      if (!sol.optimal())
        fail(Algorithm1Error::Kind::kSolverFailure,
             "algorithm1: penalized solve " + std::to_string(k + 1) + " ended " +
                 to_string(sol.status));
      const HermitianMatrix next = pen.hermitian_value(sol.x, "W");
      const double f2 = penalty_value(next, wk);
      diag.objective_sequence.push_back(sol.objective_value);
      diag.penalty_sequence.push_back(f2);
      diag.iterations = k + 1;
      wk = next;
      x = sol.x;
      done = f2 <= settings.eta;
    }
    if (!done) {
      diag.final_rank_gap = rank_gap(wk);
      diag.eigen_ratio = eigen_ratio(wk);
      fail(Algorithm1Error::Kind::kMaxIterations,
           "algorithm1: no rank-one solution after " + std::to_string(settings.max_iter) +
               " penalized solves");
    }
  }
  rank_one_detail::finish(relaxation, x, settings, out);
  diag.seconds = elapsed();
  return out;
}

/// Builds the relaxation named by `formulation` and runs the iteration.
inline BeamformerResult algorithm1(const D1Params& d1, const D2Params& d2,
                                   const Algorithm1Settings& settings = {}) {
  FormulationKind f;
  f.family = Family::kMainD1D2;
  f.d1_support = d1.support;
  f.z2_support = d2.support;
  return algorithm1(build_main_relaxation(d1, d2), f, settings);
}

inline nlohmann::json to_json(const RankOneDiagnostics& d) {
  return nlohmann::json{{"objective_sequence", d.objective_sequence},
                        {"penalty_sequence", d.penalty_sequence},
                        {"iterations", d.iterations},
                        {"relaxation_value", d.relaxation_value},
                        {"final_rank_gap", d.final_rank_gap},
                        {"eigen_ratio", d.eigen_ratio},
                        {"eigen_ratio_flag", d.eigen_ratio_flag},
                        {"feasibility_violation", d.feasibility_violation},
                        {"feasible", d.feasible},
                        {"solver_tolerance", d.solver_tolerance},
                        {"solver_iterations", d.solver_iterations},
                        {"seconds", d.seconds}};
}

}  // namespace drab

#endif  // DRAB_RANK_ONE_HPP_
