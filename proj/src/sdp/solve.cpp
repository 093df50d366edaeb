#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "matrange/error.hpp"
#include "matrange/sdp.hpp"
#include "real_sdp.hpp"

namespace matrange::sdp {

using detail::Entry;
using detail::RealSdp;
using detail::VarBlock;

namespace {

// y = y0 + T w after eliminating the equality constraints.
struct Reduction {
  RVec y0;
  RMat T;  // num_vars x free
  bool consistent = true;
};

Reduction eliminate(const SdpProblem& p) {
  const int m = p.num_vars;
  Reduction red;
  red.y0 = RVec::Zero(m);
  if (p.eq_matrix.rows() == 0) {
    red.T = RMat::Identity(m, m);
    return red;
  }
  RMat E = p.eq_matrix;
  RVec f = p.eq_rhs;
  const double scale = std::max(1.0, E.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * scale;
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < m && row < E.rows(); ++col) {
    Eigen::Index best;
    const double piv = E.col(col).segment(row, E.rows() - row).cwiseAbs().maxCoeff(&best);
    if (piv <= eps) continue;
    best += row;
    E.row(row).swap(E.row(best));
    std::swap(f(row), f(best));
    const double d = E(row, col);
    E.row(row) /= d;
    f(row) /= d;
    for (Eigen::Index r = 0; r < E.rows(); ++r) {
      if (r == row || E(r, col) == 0.0) continue;
      const double fac = E(r, col);
      E.row(r) -= fac * E.row(row);
      f(r) -= fac * f(row);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (Eigen::Index r = row; r < E.rows(); ++r)
    if (std::abs(f(r)) > 1e-9 * (1.0 + f.cwiseAbs().maxCoeff())) red.consistent = false;

  std::vector<bool> is_pivot(static_cast<std::size_t>(m), false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  red.T = RMat::Zero(m, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t j = 0; j < free_cols.size(); ++j) red.T(free_cols[j], static_cast<Eigen::Index>(j)) = 1.0;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) {
    const int pc = pivot_col[r];
    red.y0(pc) = f(static_cast<Eigen::Index>(r));
    for (std::size_t j = 0; j < free_cols.size(); ++j)
      red.T(pc, static_cast<Eigen::Index>(j)) = -E(static_cast<Eigen::Index>(r), free_cols[j]);
  }
  return red;
}

// Reduced problem in the user's orientation: min c'.w s.t. G0 + sum w_j G_j >= 0.
struct Reduced {
  std::vector<LmiConstraint> lmis;  // originals first, then 1x1 bound rows
  int num_original = 0;
  RVec c;
  double c0 = 0.0;
  Reduction red;
};

Reduced reduce(const SdpProblem& p) {
  Reduced R;
  R.red = eliminate(p);
  const RMat& T = R.red.T;
  const RVec& y0 = R.red.y0;
  const auto nf = static_cast<int>(T.cols());
  R.c = T.transpose() * p.objective;
  R.c0 = p.objective.dot(y0);
  const bool identity = p.eq_matrix.rows() == 0;

  for (const auto& lmi : p.lmis) {
    LmiConstraint out;
    if (identity) {
      out = lmi;
    } else {
      out.constant = lmi_value(lmi, y0);
      out.coefficients.resize(static_cast<std::size_t>(nf));
      for (int k = 0; k < p.num_vars; ++k) {
        const auto& ck = lmi.coefficients[static_cast<std::size_t>(k)];
        if (ck.empty()) continue;
        for (int j = 0; j < nf; ++j) {
          const double t = T(k, j);
          if (t == 0.0) continue;
          for (const auto& e : ck.entries)
            out.coefficients[static_cast<std::size_t>(j)].entries.push_back({e.row, e.col, t * e.value});
        }
      }
    }
    R.lmis.push_back(std::move(out));
  }
  R.num_original = static_cast<int>(R.lmis.size());

  auto bound_row = [&](int k, double sign, double bound) {
    LmiConstraint b;
    b.constant = CMat::Constant(1, 1, cplx(sign * (y0(k) - bound), 0.0));
    b.coefficients.resize(static_cast<std::size_t>(nf));
    for (int j = 0; j < nf; ++j)
      if (T(k, j) != 0.0) b.coefficients[static_cast<std::size_t>(j)].add_diagonal(0, sign * T(k, j));
    R.lmis.push_back(std::move(b));
  };
  for (int k = 0; k < p.num_vars; ++k) {
    if (p.lower.size() > 0 && std::isfinite(p.lower(k))) bound_row(k, 1.0, p.lower(k));
    if (p.upper.size() > 0 && std::isfinite(p.upper(k))) bound_row(k, -1.0, p.upper(k));
  }
  return R;
}

bool lmi_is_real(const LmiConstraint& lmi) {
  if (lmi.constant.imag().cwiseAbs().maxCoeff() != 0.0) return false;
  for (const auto& c : lmi.coefficients)
    for (const auto& e : c.entries)
      if (e.value.imag() != 0.0) return false;
  return true;
}

struct Embedded {
  RealSdp rp;
  std::vector<bool> doubled;
};

// Hermitian blocks become [[Re, -Im], [Im, Re]]; all-real blocks stay as they are.
Embedded embed(const std::vector<LmiConstraint>& lmis, const RVec& c, int num_vars) {
  Embedded out;
  RealSdp& rp = out.rp;
  rp.A.resize(static_cast<std::size_t>(num_vars));
  rp.b = -c;
  for (std::size_t li = 0; li < lmis.size(); ++li) {
    const auto& lmi = lmis[li];
    const int b = lmi.size();
    const bool real = lmi_is_real(lmi);
    out.doubled.push_back(!real);
    const int bs = real ? b : 2 * b;
    rp.block_sizes.push_back(bs);
    RMat C(bs, bs);
    if (real) {
      C = lmi.constant.real();
    } else {
      C.topLeftCorner(b, b) = lmi.constant.real();
      C.bottomRightCorner(b, b) = lmi.constant.real();
      C.bottomLeftCorner(b, b) = lmi.constant.imag();
      C.topRightCorner(b, b) = -lmi.constant.imag();
    }
    rp.C.push_back(0.5 * (C + C.transpose()));
    const int block = static_cast<int>(li);
    for (int k = 0; k < num_vars; ++k) {
      const auto& coef = lmi.coefficients[static_cast<std::size_t>(k)];
      if (coef.empty()) continue;
      VarBlock vb;
      vb.block = block;
      for (const auto& e : coef.entries) {
        const double re = -e.value.real(), im = -e.value.imag();
        if (re != 0.0) {
          vb.entries.push_back({e.row, e.col, re});
          if (!real) vb.entries.push_back({e.row + b, e.col + b, re});
        }
        if (!real && im != 0.0) {
          vb.entries.push_back({e.row + b, e.col, im});
          vb.entries.push_back({e.row, e.col + b, -im});
        }
      }
      if (!vb.entries.empty()) rp.A[static_cast<std::size_t>(k)].push_back(std::move(vb));
    }
  }
  return out;
}

CMat complex_dual(const RMat& X, bool doubled) {
  if (!doubled) return X.cast<cplx>();
  const Eigen::Index b = X.rows() / 2;
  const RMat P = X.topLeftCorner(b, b) + X.bottomRightCorner(b, b);
  const RMat Q = X.bottomLeftCorner(b, b) - X.topRightCorner(b, b);
  CMat C(b, b);
  C.real() = P;
  C.imag() = Q;
  return C;
}

double violation(const SdpProblem& p, const RVec& y) {
  double v = 0.0;
  for (const auto& lmi : p.lmis) v = std::max(v, -lmi_min_eig(lmi, y));
  if (p.eq_matrix.rows() > 0) v = std::max(v, (p.eq_matrix * y - p.eq_rhs).cwiseAbs().maxCoeff());
  for (int k = 0; k < p.num_vars; ++k) {
    if (p.lower.size() > 0 && std::isfinite(p.lower(k))) v = std::max(v, p.lower(k) - y(k));
    if (p.upper.size() > 0 && std::isfinite(p.upper(k))) v = std::max(v, y(k) - p.upper(k));
  }
  return v;
}

SdpSolution phase_one(const SdpProblem& p, const Reduced& R, const SolverOptions& opt) {
  const auto nf = static_cast<int>(R.red.T.cols());
  // Variables (w, t); maximize t.
  std::vector<LmiConstraint> lmis = R.lmis;
  for (auto& lmi : lmis) {
    SparseHermitian tcoef;
    for (int i = 0; i < lmi.size(); ++i) tcoef.add_diagonal(i, -1.0);
    lmi.coefficients.push_back(std::move(tcoef));
  }
  LmiConstraint cap;
  cap.constant = CMat::Constant(1, 1, cplx(1.0, 0.0));
  cap.coefficients.resize(static_cast<std::size_t>(nf + 1));
  cap.coefficients.back().add_diagonal(0, -1.0);
  lmis.push_back(std::move(cap));
  RVec c = RVec::Zero(nf + 1);
  c(nf) = -1.0;

  const Embedded em = embed(lmis, c, nf + 1);
  const auto r = detail::ipm_solve(em.rp, opt.tol, opt.max_iterations);

  SdpSolution sol;
  sol.iterations = r.iterations;
  const RVec w = r.y.head(nf);
  const double t = r.y(nf);
  sol.y = R.red.y0 + R.red.T * w;
  sol.objective = p.objective.dot(sol.y);
  sol.max_violation = violation(p, sol.y);
  for (int li = 0; li < R.num_original; ++li)
    sol.dual.push_back(complex_dual(r.X[static_cast<std::size_t>(li)], em.doubled[static_cast<std::size_t>(li)]));
  sol.dual_objective = t;
  if (!r.converged) {
    sol.status = Status::numerical_failure;
    sol.message = "phase I: " + r.message;
    return sol;
  }
  if (t < -opt.tol) {
    // t* = <F0, X> + x_cap < 0 with <F_k, X> = 0: Farkas certificate on the LMI part.
    sol.status = Status::infeasible;
    sol.message = "phase I optimum " + std::to_string(t);
  } else {
    sol.status = Status::feasible_point;
    sol.message = "phase I optimum " + std::to_string(t);
  }
  return sol;
}

void check_tol(const SolverOptions& opt) {
  require(opt.tol >= 1e-12 && opt.tol <= 1e-3, ErrorKind::precondition, "tol outside [1e-12, 1e-3]");
  require(opt.max_iterations > 0, ErrorKind::precondition, "iteration cap must be positive");
}

}  // namespace

ProjectionResult alternating_projections(const SdpProblem& problem, int max_iterations, double tol) {
  validate(problem);
  const Reduced R = reduce(problem);
  ProjectionResult out;
  const auto nf = static_cast<int>(R.red.T.cols());
  out.y = R.red.y0;
  if (!R.red.consistent) return out;
  // Gram matrix of the coefficients under Re tr(A^* B).
  RMat G = RMat::Zero(nf, nf);
  std::vector<std::vector<CMat>> dense(R.lmis.size());
  for (std::size_t li = 0; li < R.lmis.size(); ++li)
    for (int j = 0; j < nf; ++j) dense[li].push_back(R.lmis[li].coefficients[static_cast<std::size_t>(j)].dense(R.lmis[li].size()));
  for (std::size_t li = 0; li < R.lmis.size(); ++li)
    for (int j = 0; j < nf; ++j)
      for (int l = j; l < nf; ++l) {
        const double g = (dense[li][j].adjoint() * dense[li][l]).trace().real();
        G(j, l) += g;
        if (l != j) G(l, j) += g;
      }
  G.diagonal().array() += 1e-12 * std::max(1.0, G.diagonal().maxCoeff());
  const Eigen::LDLT<RMat> ldlt(G);
  RVec w = RVec::Zero(nf);
  const double margin = 10.0 * tol;
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    double worst = std::numeric_limits<double>::infinity();
    RVec h = RVec::Zero(nf);
    for (std::size_t li = 0; li < R.lmis.size(); ++li) {
      const CMat Z = hermitian_part(lmi_value(R.lmis[li], w));
      Eigen::SelfAdjointEigenSolver<CMat> es(Z);
      worst = std::min(worst, es.eigenvalues()(0));
      const RVec clipped = es.eigenvalues().cwiseMax(margin);
      const CMat target = es.eigenvectors() * clipped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
      const CMat resid = target - R.lmis[li].constant;
      for (int j = 0; j < nf; ++j) h(j) += (dense[li][j].adjoint() * resid).trace().real();
    }
    out.min_eig = worst;
    if (worst >= -tol) {
      out.converged = true;
      break;
    }
    w = ldlt.solve(h);
  }
  out.y = R.red.y0 + R.red.T * w;
  return out;
}

SdpSolution find_feasible_point(const SdpProblem& problem, const SolverOptions& opt) {
  validate(problem);
  check_tol(opt);
  const Reduced R = reduce(problem);
  if (!R.red.consistent) {
    SdpSolution sol;
    sol.status = Status::infeasible;
    sol.message = "inconsistent equality constraints";
    return sol;
  }
  return phase_one(problem, R, opt);
}

SdpSolution solve_sdp(const SdpProblem& problem, double tol) {
  SolverOptions opt;
  opt.tol = tol;
  return solve_sdp(problem, opt);
}

SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& opt) {
  validate(problem);
  check_tol(opt);
  const Reduced R = reduce(problem);
  SdpSolution sol;
  if (!R.red.consistent) {
    sol.status = Status::infeasible;
    sol.message = "inconsistent equality constraints";
    return sol;
  }
  const auto nf = static_cast<int>(R.red.T.cols());
  if (R.lmis.empty()) {
    sol.y = R.red.y0;
    sol.objective = R.c0;
    sol.dual_objective = R.c0;
    if (R.c.cwiseAbs().maxCoeff() > 0.0) {
      sol.status = Status::numerical_failure;
      sol.message = "objective unbounded: no constraints";
    } else {
      sol.status = Status::optimal;
    }
    return sol;
  }

  const Embedded em = embed(R.lmis, R.c, nf);
  const auto r = detail::ipm_solve(em.rp, opt.tol, opt.max_iterations);
  sol.iterations = r.iterations;
  sol.y = R.red.y0 + R.red.T * r.y;
  sol.objective = problem.objective.dot(sol.y);
  sol.dual_objective = R.c0 - r.pobj;
  for (int li = 0; li < R.num_original; ++li)
    sol.dual.push_back(complex_dual(r.X[static_cast<std::size_t>(li)], em.doubled[static_cast<std::size_t>(li)]));
  sol.max_violation = violation(problem, sol.y);
  if (r.converged) {
    sol.status = Status::optimal;
    return sol;
  }
  sol.message = r.message;
  if (r.unbounded) {
    sol.status = Status::numerical_failure;
    sol.message = "objective unbounded below";
    return sol;
  }
  if (!opt.phase_one_on_failure) {
    sol.status = Status::numerical_failure;
    return sol;
  }
  SdpSolution p1 = phase_one(problem, R, opt);
  if (p1.status != Status::numerical_failure) {
    p1.message = "main solve failed (" + r.message + "); " + p1.message;
    return p1;
  }
  const auto ap = alternating_projections(problem, 2000, opt.tol);
  if (ap.converged) {
    sol.status = Status::feasible_point;
    sol.y = ap.y;
    sol.objective = problem.objective.dot(ap.y);
    sol.max_violation = violation(problem, ap.y);
    sol.message = "main solve and phase I failed; alternating projections found a feasible point";
    return sol;
  }
  sol.status = Status::numerical_failure;
  sol.message = "main solve, phase I and alternating projections failed";
  return sol;
}

}  // namespace matrange::sdp
