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

// Dense primal-dual interior-point method for problems of the form
//
//   minimize    c^T x
//   subject to  G x + s = h,  A x = b,  s in K
//
// with K a product of a nonnegative orthant, second-order cones and real PSD
// cones in svec coordinates. The iteration runs on the homogeneous self-dual
// embedding with Nesterov-Todd scaling and Mehrotra predictor-corrector
// steps, so infeasible and unbounded problems terminate with certificates.
//
// The implementation is dense and sized for problems with a few hundred
// variables.

#ifndef DRAB_CONIC_IPM_HPP_
#define DRAB_CONIC_IPM_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "drab/hermitian_conic.hpp"
#include "drab/linalg.hpp"

namespace drab {

struct IpmSettings {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  int max_iter = 100;
  double step_fraction = 0.99;
  int equilibration_passes = 10;
  int refinement_steps = 3;
};

namespace ipm_detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One cone block of the stacked slack vector.
struct Block {
  ConeKind kind = ConeKind::kNonnegative;
  int offset = 0;
  int dim = 0;
  int order = 0;  // PSD matrix order

  // Nesterov-Todd scaling at the current iterate.
  RealVector w;       // nonneg: sqrt(s / z)
  double beta = 1.0;  // soc
  RealVector wbar;    // soc NT point, wbar^T J wbar = 1
  RealMatrix r;       // psd: W(U) = R^T U R
  RealMatrix rinv;
  RealVector lambda_eig;  // psd: scaled point is diag(lambda_eig)
};

inline RealVector soc_j(const RealVector& v) {
  RealVector out = -v;
  out(0) = v(0);
  return out;
}

inline double soc_jdot(const RealVector& u, const RealVector& v) {
  return u(0) * v(0) - u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
}

inline RealMatrix svec_diag(const RealVector& d) {
  return svec(RealMatrix(d.asDiagonal()));
}

// Square-root factor L with M = L L^T, by Cholesky when possible and from an
// eigendecomposition otherwise.
inline bool psd_factor(const RealMatrix& m, RealMatrix& l) {
  Eigen::LLT<RealMatrix> llt(m);
  if (llt.info() == Eigen::Success) {
    l = llt.matrixL();
    if (l.diagonal().minCoeff() > 0.0 && l.allFinite()) return true;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) return false;
  l = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
  return l.allFinite();
}

class Cones {
 public:
  std::vector<Block> blocks;
  int m = 0;
  int degree = 0;

  void add(ConeKind kind, int dim, int order) {
    Block b;
    b.kind = kind;
    b.offset = m;
    b.dim = dim;
    b.order = order;
    blocks.push_back(b);
    m += dim;
    degree += kind == ConeKind::kNonnegative ? dim
              : kind == ConeKind::kSecondOrder ? 1
                                               : order;
  }

  RealVector identity() const {
    RealVector e = RealVector::Zero(m);
    for (const auto& b : blocks) {
      switch (b.kind) {
        case ConeKind::kNonnegative: e.segment(b.offset, b.dim).setOnes(); break;
        case ConeKind::kSecondOrder: e(b.offset) = 1.0; break;
        case ConeKind::kPsd:
          e.segment(b.offset, b.dim) = svec(RealMatrix::Identity(b.order, b.order));
          break;
        default: break;
      }
    }
    return e;
  }

  // Smallest "eigenvalue" of v with respect to K (positive iff interior).
  double min_eig(const RealVector& v) const {
    double lo = kInf;
    for (const auto& b : blocks) {
      const auto seg = v.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative: lo = std::min(lo, seg.minCoeff()); break;
        case ConeKind::kSecondOrder:
          lo = std::min(lo, seg(0) - seg.tail(b.dim - 1).norm());
          break;
        case ConeKind::kPsd: {
          Eigen::SelfAdjointEigenSolver<RealMatrix> es(smat(seg), Eigen::EigenvaluesOnly);
          lo = std::min(lo, es.eigenvalues().minCoeff());
          break;
        }
        default: break;
      }
    }
    return lo;
  }

  // Computes the NT scaling for interior s, z. Returns false on breakdown.
  bool compute_scaling(const RealVector& s, const RealVector& z) {
    for (auto& b : blocks) {
      const RealVector sb = s.segment(b.offset, b.dim);
      const RealVector zb = z.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative:
          if (sb.minCoeff() <= 0.0 || zb.minCoeff() <= 0.0) return false;
          b.w = (sb.array() / zb.array()).sqrt();
          break;
        case ConeKind::kSecondOrder: {
          const double sn = soc_jdot(sb, sb);
          const double zn = soc_jdot(zb, zb);
          if (!(sn > 0.0) || !(zn > 0.0) || sb(0) <= 0.0 || zb(0) <= 0.0) return false;
          const RealVector sbar = sb / std::sqrt(sn);
          const RealVector zbar = zb / std::sqrt(zn);
          const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
          b.wbar = (sbar + soc_j(zbar)) / (2.0 * gamma);
          b.beta = std::pow(sn / zn, 0.25);
          break;
        }
        case ConeKind::kPsd: {
          RealMatrix ls, lz;
          if (!psd_factor(smat(sb), ls) || !psd_factor(smat(zb), lz)) return false;
          Eigen::JacobiSVD<RealMatrix> svd(lz.transpose() * ls,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
          const RealVector sig = svd.singularValues();
          if (!(sig.minCoeff() > 0.0)) return false;
          const RealVector isq = sig.cwiseSqrt().cwiseInverse();
          b.r = ls * svd.matrixV() * isq.asDiagonal();
          // R^{-1} = Sigma^{1/2} V^T Ls^{-1}
          const RealMatrix lsinv = ls.inverse();
          b.rinv = sig.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * lsinv;
          b.lambda_eig = sig;
          if (!b.r.allFinite() || !b.rinv.allFinite()) return false;
          break;
        }
        default: break;
      }
    }
    return true;
  }

  // Scaled point lambda = W z.
  RealVector lambda(const RealVector& z) const {
    RealVector out(m);
    for (const auto& b : blocks) {
      if (b.kind == ConeKind::kPsd) {
        out.segment(b.offset, b.dim) = svec_diag(b.lambda_eig);
      } else {
        out.segment(b.offset, b.dim) = apply_block(b, Op::kW, z.segment(b.offset, b.dim));
      }
    }
    return out;
  }

  enum class Op { kW, kWt, kWinv, kWinvt };

  // beta * [[a, q^T], [q, I + q q^T / (1 + a)]] with (a, q) = wbar, or its
  // inverse, obtained by flipping the sign of q and dividing by beta.
  static RealVector soc_apply(const Block& b, bool forward, const RealVector& v) {
    const Eigen::Index k = b.dim - 1;
    const double a = b.wbar(0);
    const auto q = b.wbar.tail(k);
    const double sign = forward ? 1.0 : -1.0;
    const double qv = q.dot(v.tail(k));
    RealVector out(b.dim);
    out(0) = a * v(0) + sign * qv;
    out.tail(k) = v.tail(k) + (sign * v(0) + qv / (1.0 + a)) * q;
    return forward ? RealVector(b.beta * out) : RealVector(out / b.beta);
  }

  static RealVector apply_block(const Block& b, Op op, const RealVector& v) {
    switch (b.kind) {
      case ConeKind::kNonnegative:
        return (op == Op::kW || op == Op::kWt) ? RealVector(b.w.cwiseProduct(v))
                                               : RealVector(v.cwiseQuotient(b.w));
      case ConeKind::kSecondOrder:
        return soc_apply(b, op == Op::kW || op == Op::kWt, v);
      case ConeKind::kPsd: {
        const RealMatrix x = smat(v);
        switch (op) {
          case Op::kW: return svec(b.r.transpose() * x * b.r);
          case Op::kWt: return svec(b.r * x * b.r.transpose());
          case Op::kWinv: return svec(b.rinv.transpose() * x * b.rinv);
          case Op::kWinvt: return svec(b.rinv * x * b.rinv.transpose());
        }
        break;
      }
      default: break;
    }
    return v;
  }

  RealVector apply(Op op, const RealVector& v) const {
    RealVector out(m);
    for (const auto& b : blocks)
      out.segment(b.offset, b.dim) = apply_block(b, op, v.segment(b.offset, b.dim));
    return out;
  }

  // W^{-T} G, skipping columns that vanish on a block.
  RealMatrix scale_columns(const RealMatrix& g) const {
    RealMatrix out = RealMatrix::Zero(g.rows(), g.cols());
    for (const auto& b : blocks) {
      const auto gb = g.middleRows(b.offset, b.dim);
      auto ob = out.middleRows(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative:
          ob = b.w.cwiseInverse().asDiagonal() * gb;
          break;
        case ConeKind::kSecondOrder:
          for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (gb.col(j).isZero(0.0)) continue;
            ob.col(j) = soc_apply(b, false, gb.col(j));
          }
          break;
        case ConeKind::kPsd:
          for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (gb.col(j).isZero(0.0)) continue;
            const RealMatrix x = smat(gb.col(j));
            ob.col(j) = svec(b.rinv * x * b.rinv.transpose());
          }
          break;
        default: break;
      }
    }
    return out;
  }

  // Jordan product u o v.
  RealVector product(const RealVector& u, const RealVector& v) const {
    RealVector out(m);
    for (const auto& b : blocks) {
      const auto ub = u.segment(b.offset, b.dim);
      const auto vb = v.segment(b.offset, b.dim);
      auto ob = out.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative: ob = ub.cwiseProduct(vb); break;
        case ConeKind::kSecondOrder:
          ob(0) = ub.dot(vb);
          ob.tail(b.dim - 1) = ub(0) * vb.tail(b.dim - 1) + vb(0) * ub.tail(b.dim - 1);
          break;
        case ConeKind::kPsd: {
          const RealMatrix x = smat(ub);
          const RealMatrix y = smat(vb);
          ob = svec(0.5 * (x * y + y * x));
          break;
        }
        default: break;
      }
    }
    return out;
  }

  // Solves lambda o x = r for x, with lambda the current scaled point.
  RealVector divide(const RealVector& lam, const RealVector& r) const {
    RealVector out(m);
    for (const auto& b : blocks) {
      const auto lb = lam.segment(b.offset, b.dim);
      const auto rb = r.segment(b.offset, b.dim);
      auto ob = out.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative: ob = rb.cwiseQuotient(lb); break;
        case ConeKind::kSecondOrder: {
          const double det = lb(0) * lb(0) - lb.tail(b.dim - 1).squaredNorm();
          const double x0 = (lb(0) * rb(0) - lb.tail(b.dim - 1).dot(rb.tail(b.dim - 1))) / det;
          ob(0) = x0;
          ob.tail(b.dim - 1) = (rb.tail(b.dim - 1) - x0 * lb.tail(b.dim - 1)) / lb(0);
          break;
        }
        case ConeKind::kPsd: {
          RealMatrix x = smat(rb);
          for (int j = 0; j < b.order; ++j)
            for (int i = 0; i < b.order; ++i)
              x(i, j) *= 2.0 / (b.lambda_eig(i) + b.lambda_eig(j));
          ob = svec(x);
          break;
        }
        default: break;
      }
    }
    return out;
  }

  // Largest alpha with lambda + alpha d in K (lambda interior), or inf.
  double max_step(const RealVector& lam, const RealVector& d) const {
    double alpha = kInf;
    for (const auto& b : blocks) {
      const auto lb = lam.segment(b.offset, b.dim);
      const auto db = d.segment(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::kNonnegative:
          for (int i = 0; i < b.dim; ++i)
            if (db(i) < 0.0) alpha = std::min(alpha, -lb(i) / db(i));
          break;
        case ConeKind::kSecondOrder:
          alpha = std::min(alpha, soc_step(lb, db));
          break;
        case ConeKind::kPsd: {
          const RealVector isq = b.lambda_eig.cwiseSqrt().cwiseInverse();
          const RealMatrix mm = isq.asDiagonal() * smat(db) * isq.asDiagonal();
          Eigen::SelfAdjointEigenSolver<RealMatrix> es(mm, Eigen::EigenvaluesOnly);
          const double lo = es.eigenvalues().minCoeff();
          if (lo < 0.0) alpha = std::min(alpha, -1.0 / lo);
          break;
        }
        default: break;
      }
    }
    return alpha;
  }

  static double soc_step(const Eigen::Ref<const RealVector>& l,
                         const Eigen::Ref<const RealVector>& d) {
    const Eigen::Index k = l.size() - 1;
    const double a = d(0) * d(0) - d.tail(k).squaredNorm();
    const double bh = l(0) * d(0) - l.tail(k).dot(d.tail(k));
    const double c = l(0) * l(0) - l.tail(k).squaredNorm();
    // Smallest positive root of a t^2 + 2 bh t + c (c > 0).
    double best = kInf;
    auto take = [&](double t) {
      if (t > 0.0 && l(0) + t * d(0) >= 0.0) best = std::min(best, t);
    };
    const double scale = std::max({std::abs(a), std::abs(bh), std::abs(c), 1e-300});
    if (std::abs(a) <= 1e-14 * scale) {
      if (bh < 0.0) take(-c / (2.0 * bh));
    } else {
      const double disc = bh * bh - a * c;
      if (disc >= 0.0) {
        const double q = -(bh + std::copysign(std::sqrt(disc), bh));
        if (q != 0.0) {
          take(q / a);
          take(c / q);
        }
      }
    }
    // The first coordinate can also leave the cone through the apex side.
    if (d(0) < 0.0 && best == kInf) best = -l(0) / d(0);
    return best;
  }
};

}  // namespace ipm_detail

/// Interior-point solver over the standard form above. The constructor
/// translates a ConicProblemIR: zero-cone blocks become rows of A x = b and
/// all other blocks become rows of G x + s = h with s = map x + offset.
class ConicIpm {
 public:
  ConicIpm(const ConicProblemIR& ir, IpmSettings settings = {})
      : settings_(settings) {
    ir.validate();
    n_ = ir.n_vars();
    c_ = ir.objective;
    offset_ = ir.objective_offset;

    int p = 0;
    int l = 0;
    for (const auto& c : ir.constraints()) {
      if (c.kind == ConeKind::kZero) p += static_cast<int>(c.dim());
      if (c.kind == ConeKind::kNonnegative) l += static_cast<int>(c.dim());
    }
    if (l > 0) cones_.add(ConeKind::kNonnegative, l, 0);
    for (const auto& c : ir.constraints())
      if (c.kind == ConeKind::kSecondOrder)
        cones_.add(ConeKind::kSecondOrder, static_cast<int>(c.dim()), 0);
    for (const auto& c : ir.constraints())
      if (c.kind == ConeKind::kPsd)
        cones_.add(ConeKind::kPsd, static_cast<int>(c.dim()), c.psd_order);

    a_ = RealMatrix::Zero(p, n_);
    b_ = RealVector::Zero(p);
    g_ = RealMatrix::Zero(cones_.m, n_);
    h_ = RealVector::Zero(cones_.m);
    int pr = 0;
    int lr = 0;
    int cone_index = l > 0 ? 1 : 0;
    auto place = [&](const ConeConstraint& c, int row) {
      const RealMatrix dense(c.map);
      g_.middleRows(row, c.dim()) = -dense;
      h_.segment(row, c.dim()) = c.offset;
    };
    for (const auto& c : ir.constraints()) {
      if (c.kind == ConeKind::kZero) {
        a_.middleRows(pr, c.dim()) = RealMatrix(c.map);
        b_.segment(pr, c.dim()) = -c.offset;
        pr += static_cast<int>(c.dim());
      } else if (c.kind == ConeKind::kNonnegative) {
        place(c, lr);
        lr += static_cast<int>(c.dim());
      }
    }
    for (const auto& c : ir.constraints())
      if (c.kind == ConeKind::kSecondOrder) place(c, cones_.blocks[cone_index++].offset);
    for (const auto& c : ir.constraints())
      if (c.kind == ConeKind::kPsd) place(c, cones_.blocks[cone_index++].offset);
  }

  ConicSolution solve() {
    ConicSolution out;
    out.solver_tolerance = settings_.feastol;
    out.x = RealVector::Zero(n_);
    try {
      equilibrate();
      run(out);
    } catch (const std::exception&) {
      out.status = SolveStatus::kNumericalLimit;
    }
    if (!out.x.allFinite()) {
      out.x.setZero();
      out.status = SolveStatus::kNumericalLimit;
    }
    out.objective_value = c_.dot(out.x) + offset_;
    return out;
  }

 private:
  using Cones = ipm_detail::Cones;
  using Op = Cones::Op;

  // Ruiz-style scaling: column scaling of x, one positive factor per cone
  // block (per row for the orthant and equalities), and a scalar for c.
  void equilibrate() {
    col_ = RealVector::Ones(n_);
    row_ = RealVector::Ones(cones_.m);
    arow_ = RealVector::Ones(a_.rows());
    gs_ = g_;
    as_ = a_;
    for (int pass = 0; pass < settings_.equilibration_passes; ++pass) {
      RealVector cn = RealVector::Zero(n_);
      for (int j = 0; j < n_; ++j) {
        double v = gs_.rows() > 0 ? gs_.col(j).cwiseAbs().maxCoeff() : 0.0;
        if (as_.rows() > 0) v = std::max(v, as_.col(j).cwiseAbs().maxCoeff());
        cn(j) = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
      }
      gs_ = gs_ * cn.asDiagonal();
      as_ = as_ * cn.asDiagonal();
      col_ = col_.cwiseProduct(cn);
      for (const auto& b : cones_.blocks) {
        auto blk = gs_.middleRows(b.offset, b.dim);
        if (b.kind == ConeKind::kNonnegative) {
          for (int i = 0; i < b.dim; ++i) {
            const double v = blk.row(i).cwiseAbs().maxCoeff();
            const double f = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
            blk.row(i) *= f;
            row_(b.offset + i) *= f;
          }
        } else {
          const double v = blk.cwiseAbs().maxCoeff();
          const double f = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
          blk *= f;
          row_.segment(b.offset, b.dim) *= f;
        }
      }
      for (Eigen::Index i = 0; i < as_.rows(); ++i) {
        const double v = as_.row(i).cwiseAbs().maxCoeff();
        const double f = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
        as_.row(i) *= f;
        arow_(i) *= f;
      }
    }
    hs_ = row_.cwiseProduct(h_);
    bs_ = arow_.cwiseProduct(b_);
    cs_ = col_.cwiseProduct(c_);
    const double cn = cs_.size() > 0 ? cs_.cwiseAbs().maxCoeff() : 0.0;
    cscale_ = cn > 0.0 ? 1.0 / cn : 1.0;
    cs_ *= cscale_;
  }

  // Factorization for the current scaling. Without equality rows the normal
  // matrix G~^T G~ is never formed: a QR factorization of G~ gives its
  // Cholesky factor directly. Otherwise [G~^T G~, A^T; A, 0] is LU-factored.
  bool factor() {
    gt_ = cones_.scale_columns(gs_);
    const int p = static_cast<int>(as_.rows());
    if (p == 0) {
      qr_.compute(gt_);
      rfac_ = qr_.matrixQR().topRows(n_).triangularView<Eigen::Upper>();
      const RealVector diag = rfac_.diagonal().cwiseAbs();
      return rfac_.allFinite() && diag.minCoeff() > 1e-300 &&
             diag.minCoeff() > 1e-18 * diag.maxCoeff();
    }
    kkt_ = RealMatrix::Zero(n_ + p, n_ + p);
    kkt_.topLeftCorner(n_, n_).noalias() = gt_.transpose() * gt_;
    kkt_.topRightCorner(n_, p) = as_.transpose();
    kkt_.bottomLeftCorner(p, n_) = as_;
    lu_.compute(kkt_);
    return kkt_.allFinite() && lu_.rcond() > 1e-300;
  }

  RealVector solve_factored(const RealVector& rhs) const {
    if (as_.rows() == 0) {
      RealVector y = rfac_.transpose().triangularView<Eigen::Lower>().solve(rhs);
      return rfac_.triangularView<Eigen::Upper>().solve(y);
    }
    return lu_.solve(rhs);
  }

  struct Dir {
    RealVector x, y, z, s;
  };

  // Solves  A^T uy + G^T uz = bx,  A ux = by,  G ux - W^T W uz = bz,
  // refining against the unreduced system.
  Dir kkt_solve(const RealVector& bx, const RealVector& by, const RealVector& bz) const {
    Dir d = kkt_solve_reduced(bx, by, bz);
    for (int k = 0; k < settings_.refinement_steps; ++k) {
      const RealVector r1 = bx - as_.transpose() * d.y - gs_.transpose() * d.z;
      const RealVector r2 = by - as_ * d.x;
      const RealVector r3 =
          bz - gs_ * d.x + cones_.apply(Op::kWt, cones_.apply(Op::kW, d.z));
      if (!r1.allFinite() || !r2.allFinite() || !r3.allFinite()) break;
      const Dir c = kkt_solve_reduced(r1, r2, r3);
      d.x += c.x;
      d.y += c.y;
      d.z += c.z;
    }
    return d;
  }

  Dir kkt_solve_reduced(const RealVector& bx, const RealVector& by,
                        const RealVector& bz) const {
    const int p = static_cast<int>(as_.rows());
    const RealVector wbz = cones_.apply(Op::kWinvt, bz);
    RealVector rhs(n_ + p);
    rhs.head(n_) = bx + gt_.transpose() * wbz;
    rhs.tail(p) = by;
    const RealVector sol = solve_factored(rhs);
    Dir d;
    d.x = sol.head(n_);
    d.y = sol.tail(p);
    // uz = W^{-1} (G~ ux - W^{-T} bz)
    d.z = cones_.apply(Op::kWinv, RealVector(gt_ * d.x - wbz));
    return d;
  }

  void run(ConicSolution& out) {
    const int m = cones_.m;
    const int p = static_cast<int>(as_.rows());
    const RealVector e = cones_.identity();
    const double resx0 = std::max(1.0, cs_.norm());
    const double resy0 = std::max(1.0, bs_.norm());
    const double resz0 = std::max(1.0, hs_.norm());

    // Initial point: least-norm primal and dual with identity scaling.
    for (auto& b : cones_.blocks) {
      b.w = RealVector::Ones(b.dim);
      b.beta = 1.0;
      b.wbar = RealVector::Zero(b.dim);
      if (b.dim > 0) b.wbar(0) = 1.0;
      b.r = RealMatrix::Identity(b.order, b.order);
      b.rinv = b.r;
      b.lambda_eig = RealVector::Ones(b.order);
    }
    if (!factor()) {
      out.status = SolveStatus::kNumericalLimit;
      return;
    }
    Dir d0 = kkt_solve(RealVector::Zero(n_), bs_, hs_);
    RealVector x = d0.x;
    RealVector s = -d0.z;
    Dir d1 = kkt_solve(-cs_, RealVector::Zero(p), RealVector::Zero(m));
    RealVector y = d1.y;
    RealVector z = d1.z;
    {
      const double ts = -cones_.min_eig(s);
      const double tz = -cones_.min_eig(z);
      if (ts >= -1e-8 * std::max(1.0, s.norm())) s += (1.0 + ts) * e;
      if (tz >= -1e-8 * std::max(1.0, z.norm())) z += (1.0 + tz) * e;
    }
    double tau = 1.0;
    double kappa = 1.0;

    RealVector best_x = x;
    double best_score = ipm_detail::kInf;

    for (int iter = 0; iter <= settings_.max_iter; ++iter) {
      out.iterations = iter;
      const double gap = s.dot(z);
      const double mu = (gap + tau * kappa) / (cones_.degree + 1);

      // Residuals of the embedding.
      const RealVector rx = as_.transpose() * y + gs_.transpose() * z + cs_ * tau;
      const RealVector ry = -as_ * x + bs_ * tau;
      const RealVector rz = s + gs_ * x - hs_ * tau;
      const double cx = cs_.dot(x);
      const double by = bs_.dot(y);
      const double hz = hs_.dot(z);
      const double rt = kappa + cx + by + hz;

      // Convergence tests on the normalized iterate.
      const double pres = std::max((as_ * x - bs_ * tau).norm() / resy0,
                                   (gs_ * x + s - hs_ * tau).norm() / resz0) / tau;
      const double dres = (rx).norm() / resx0 / tau;
      const double pcost = cx / tau;
      const double dcost = -(by + hz) / tau;
      // Gap in the units of the original objective.
      const double ngap = gap / (tau * tau) / cscale_;
      double relgap = ipm_detail::kInf;
      if (pcost < 0.0) relgap = ngap * cscale_ / -pcost;
      else if (dcost > 0.0) relgap = ngap * cscale_ / dcost;
      const double pinf_den = -(hz + by);
      const double pinf = pinf_den > 0.0
                              ? (as_.transpose() * y + gs_.transpose() * z).norm() / resx0 / pinf_den
                              : ipm_detail::kInf;
      const double dinf = cx < 0.0
                              ? std::max((as_ * x).norm() / resy0, (gs_ * x + s).norm() / resz0) / -cx
                              : ipm_detail::kInf;

      const double score = std::max({pres, dres, std::min(ngap, relgap)});
      if (score < best_score && std::isfinite(score)) {
        best_score = score;
        best_x = x / tau;
      }
      out.primal_residual = pres;
      out.dual_residual = dres;
      out.gap = ngap;

      if (pres <= settings_.feastol && dres <= settings_.feastol &&
          (ngap <= settings_.abstol || relgap <= settings_.reltol)) {
        out.status = SolveStatus::kOptimal;
        out.x = col_.cwiseProduct(x / tau);
        return;
      }
      if (pinf <= settings_.feastol) {
        out.status = SolveStatus::kInfeasible;
        out.x.setZero();
        return;
      }
      if (dinf <= settings_.feastol) {
        out.status = SolveStatus::kUnbounded;
        out.x = col_.cwiseProduct(x);
        return;
      }
      if (iter == settings_.max_iter) break;

      if (!cones_.compute_scaling(s, z) || !factor()) break;
      const RealVector lam = cones_.lambda(z);

      const Dir v = kkt_solve(-cs_, bs_, hs_);
      const double v_wz = cones_.apply(Op::kW, v.z).squaredNorm();

      // One Newton solve for a given centering target.
      auto newton = [&](double eta, const RealVector& rc, double rk, Dir& d,
                        RealVector& ds_scaled, RealVector& dz_scaled,
                        double& dtau, double& dkappa) {
        const RealVector lrc = cones_.divide(lam, rc);
        const RealVector bz = -eta * rz - cones_.apply(Op::kWt, lrc);
        const Dir u = kkt_solve(-eta * rx, eta * ry, bz);
        const double num = -eta * rt - rk / tau - cs_.dot(u.x) - bs_.dot(u.y) - hs_.dot(u.z);
        const double den = -(v_wz + kappa / tau);
        dtau = num / den;
        d.x = u.x + dtau * v.x;
        d.y = u.y + dtau * v.y;
        d.z = u.z + dtau * v.z;
        // The slack step comes from the primal equation so that the primal
        // residual contracts exactly with the step.
        d.s = -eta * rz - gs_ * d.x + hs_ * dtau;
        dz_scaled = cones_.apply(Op::kW, d.z);
        ds_scaled = cones_.apply(Op::kWinvt, d.s);
        dkappa = (rk - kappa * dtau) / tau;
      };

      auto step_limit = [&](const RealVector& dss, const RealVector& dzs, double dtau,
                            double dkappa) {
        double a = std::min(cones_.max_step(lam, dss), cones_.max_step(lam, dzs));
        if (dtau < 0.0) a = std::min(a, -tau / dtau);
        if (dkappa < 0.0) a = std::min(a, -kappa / dkappa);
        return a;
      };

      // Predictor.
      Dir da;
      RealVector dsa, dza;
      double dtau_a = 0.0, dkappa_a = 0.0;
      newton(1.0, -cones_.product(lam, lam), -tau * kappa, da, dsa, dza, dtau_a, dkappa_a);
      const double alpha_a = std::min(1.0, step_limit(dsa, dza, dtau_a, dkappa_a));
      const double sigma = std::pow(std::max(0.0, 1.0 - alpha_a), 3);

      // Corrector.
      const RealVector rc = -cones_.product(lam, lam) + sigma * mu * e -
                            cones_.product(dsa, dza);
      const double rk = -tau * kappa + sigma * mu - dtau_a * dkappa_a;
      Dir d;
      RealVector dss, dzs;
      double dtau = 0.0, dkappa = 0.0;
      newton(1.0 - sigma, rc, rk, d, dss, dzs, dtau, dkappa);
      if (!d.x.allFinite() || !d.z.allFinite() || !std::isfinite(dtau)) break;
      const double alpha =
          std::min(1.0, settings_.step_fraction * step_limit(dss, dzs, dtau, dkappa));
      if (!(alpha > 1e-12)) break;

      x += alpha * d.x;
      y += alpha * d.y;
      z += alpha * d.z;
      s += alpha * d.s;
      tau += alpha * dtau;
      kappa += alpha * dkappa;
      if (!(tau > 0.0) || !(kappa > 0.0)) break;
    }
    out.status = SolveStatus::kNumericalLimit;
    out.x = col_.cwiseProduct(best_x);
  }

  IpmSettings settings_;
  int n_ = 0;
  double offset_ = 0.0;
  RealVector c_, b_, h_;
  RealMatrix a_, g_;
  ipm_detail::Cones cones_;

  RealVector col_, row_, arow_;
  RealMatrix gs_, as_;
  RealVector hs_, bs_, cs_;
  double cscale_ = 1.0;

  RealMatrix gt_;
  RealMatrix kkt_;
  Eigen::PartialPivLU<RealMatrix> lu_;
  Eigen::HouseholderQR<RealMatrix> qr_;
  RealMatrix rfac_;
};

/// Adapter entry point: solves with feasibility and gap tolerances `tol`.
inline ConicSolution solve(const ConicProblemIR& problem, double tol = 1e-8) {
  IpmSettings settings;
  settings.feastol = settings.abstol = settings.reltol = tol;
  ConicIpm ipm(problem, settings);
  return ipm.solve();
}

}  // namespace drab

#endif  // DRAB_CONIC_IPM_HPP_
