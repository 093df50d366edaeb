// Infeasible primal-dual interior point method, HKM direction with a Mehrotra
// predictor-corrector step. Coefficients are kept sparse; the Schur complement
// M_ij = <A_i, X A_j S^-1> is assembled block by block.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "matrange/kernels.hpp"
#include "real_sdp.hpp"

namespace matrange::sdp::detail {

namespace {

double frob(const RMat& a, const RMat& b) {
  return kernels::dot(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

double frob(const std::vector<RMat>& a, const std::vector<RMat>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += frob(a[i], b[i]);
  return s;
}

double norm(const std::vector<RMat>& a) { return std::sqrt(frob(a, a)); }

RMat sym(const RMat& a) { return 0.5 * (a + a.transpose()); }

// Largest alpha with X + alpha D >= 0 (infinity if D >= 0 along the ray).
double max_step(const RMat& X, const RMat& D) {
  Eigen::LLT<RMat> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const RMat W1 = llt.matrixL().solve(D);
  RMat W = llt.matrixL().solve(W1.transpose());
  W = sym(W);
  Eigen::SelfAdjointEigenSolver<RMat> es(W, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct BlockVar {
  int var;
  const std::vector<Entry>* entries;
};

}  // namespace

RVec apply_A(const RealSdp& p, const std::vector<RMat>& K) {
  RVec r(p.num_vars());
  for (int k = 0; k < p.num_vars(); ++k) {
    double s = 0.0;
    for (const auto& vb : p.A[static_cast<std::size_t>(k)]) {
      const RMat& Kb = K[static_cast<std::size_t>(vb.block)];
      for (const auto& e : vb.entries) s += e.v * Kb(e.r, e.c);
    }
    r(k) = s;
  }
  return r;
}

std::vector<RMat> apply_At(const RealSdp& p, const RVec& y) {
  std::vector<RMat> out;
  for (int b : p.block_sizes) out.push_back(RMat::Zero(b, b));
  for (int k = 0; k < p.num_vars(); ++k) {
    const double yk = y(k);
    if (yk == 0.0) continue;
    for (const auto& vb : p.A[static_cast<std::size_t>(k)]) {
      RMat& O = out[static_cast<std::size_t>(vb.block)];
      for (const auto& e : vb.entries) O(e.r, e.c) += yk * e.v;
    }
  }
  return out;
}

IpmResult ipm_solve(const RealSdp& p, double tol, int max_iterations) {
  const int nb = static_cast<int>(p.block_sizes.size());
  const int m = p.num_vars();
  IpmResult res;

  std::vector<std::vector<BlockVar>> by_block(static_cast<std::size_t>(nb));
  std::vector<double> normA(static_cast<std::size_t>(m), 0.0);
  for (int k = 0; k < m; ++k)
    for (const auto& vb : p.A[static_cast<std::size_t>(k)]) {
      by_block[static_cast<std::size_t>(vb.block)].push_back({k, &vb.entries});
      for (const auto& e : vb.entries) normA[static_cast<std::size_t>(k)] += e.v * e.v;
    }
  for (auto& a : normA) a = std::sqrt(a);

  int ntot = 0;
  for (int b : p.block_sizes) ntot += b;
  double normC = norm(p.C);
  const double normb = p.b.norm();

  // Starting point in the style of the classical infeasible start.
  std::vector<RMat> X, S;
  for (int bi = 0; bi < nb; ++bi) {
    const int b = p.block_sizes[static_cast<std::size_t>(bi)];
    double xi = std::max(10.0, std::sqrt(static_cast<double>(b)));
    double eta = xi;
    for (const auto& bv : by_block[static_cast<std::size_t>(bi)]) {
      double nak = 0.0;
      for (const auto& e : *bv.entries) nak += e.v * e.v;
      nak = std::sqrt(nak);
      xi = std::max(xi, b * (1.0 + std::abs(p.b(bv.var))) / (1.0 + nak));
      eta = std::max(eta, nak);
    }
    eta = std::max(eta, p.C[static_cast<std::size_t>(bi)].norm());
    X.push_back(xi * RMat::Identity(b, b));
    S.push_back(eta * RMat::Identity(b, b));
  }
  RVec y = RVec::Zero(m);

  std::vector<RMat> Sinv(static_cast<std::size_t>(nb));
  RMat M(m, m);
  const double gamma = 0.95;
  struct Best {
    double merit = std::numeric_limits<double>::infinity();
    int iteration = 0;
    std::vector<RMat> X, S;
    RVec y;
    double pobj = 0, dobj = 0, pinf = 0, dinf = 0, gap = 0;
  } best;

  for (int it = 0; it < max_iterations; ++it) {
    res.iterations = it;
    const RVec AX = apply_A(p, X);
    const RVec Rp = p.b - AX;
    std::vector<RMat> Rd = apply_At(p, y);
    for (int bi = 0; bi < nb; ++bi) Rd[bi] = p.C[bi] - S[bi] - Rd[bi];

    const double pobj = frob(p.C, X);
    const double dobj = p.b.dot(y);
    const double xs = frob(X, S);
    const double mu = xs / ntot;
    res.pobj = pobj;
    res.dobj = dobj;
    res.pinf = Rp.norm() / (1.0 + normb);
    res.dinf = norm(Rd) / (1.0 + normC);
    res.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (res.pinf <= tol && res.dinf <= tol && res.gap <= tol) {
      res.converged = true;
      break;
    }
    // Near the optimum the Schur complement degrades and the residuals can
    // drift back up; remember the best iterate and stop once progress stalls.
    const double merit = std::max({res.pinf, res.dinf, res.gap});
    if (merit < 0.5 * best.merit) {
      best = {merit, it, X, S, y, pobj, dobj, res.pinf, res.dinf, res.gap};
    } else if (it - best.iteration >= 8) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "stalled (best residual %.2e at iteration %d)", best.merit, best.iteration);
      res.message = buf;
      break;
    }

    double trX = 0.0;
    for (const auto& Xb : X) trX += Xb.trace();
    if (trX > 1e10) {
      // (P) diverging: look for a Farkas ray of (D).
      std::vector<RMat> Xn = X;
      for (auto& Xb : Xn) Xb /= trX;
      const double cn = frob(p.C, Xn);
      const double an = apply_A(p, Xn).norm();
      if (cn < 0.0 && an <= 1e-6 * std::abs(cn)) res.dual_infeasible = true;
      res.message = "primal iterate diverged";
      break;
    }
    if (y.norm() > 1e12) {
      res.unbounded = true;
      res.message = "dual iterate diverged";
      break;
    }

    bool ok = true;
    for (int bi = 0; bi < nb && ok; ++bi) {
      Eigen::LLT<RMat> llt(S[bi]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      Sinv[bi] = llt.solve(RMat::Identity(S[bi].rows(), S[bi].cols()));
      Sinv[bi] = sym(Sinv[bi]);
    }
    if (!ok) {
      res.message = "slack lost definiteness";
      break;
    }

    // Schur complement.
    M.setZero();
    for (int bi = 0; bi < nb; ++bi) {
      const int b = p.block_sizes[static_cast<std::size_t>(bi)];
      const RMat& Xb = X[bi];
      const RMat& Si = Sinv[bi];
      const auto& vars = by_block[static_cast<std::size_t>(bi)];
      std::vector<int> pos(static_cast<std::size_t>(b), -1);
      std::vector<int> cols;
      for (std::size_t jj = 0; jj < vars.size(); ++jj) {
        const auto& ej = *vars[jj].entries;
        cols.clear();
        for (const auto& e : ej)
          if (pos[static_cast<std::size_t>(e.c)] < 0) {
            pos[static_cast<std::size_t>(e.c)] = static_cast<int>(cols.size());
            cols.push_back(e.c);
          }
        const int nq = static_cast<int>(cols.size());
        RMat T = RMat::Zero(b, nq);
        for (const auto& e : ej) T.col(pos[static_cast<std::size_t>(e.c)]) += e.v * Xb.col(e.r);
        RMat Sr(nq, b);
        for (int q = 0; q < nq; ++q) Sr.row(q) = Si.row(cols[static_cast<std::size_t>(q)]);
        const RMat G = T * Sr;  // X A_j S^-1 on this block
        for (int q : cols) pos[static_cast<std::size_t>(q)] = -1;
        const int j = vars[jj].var;
        for (std::size_t ii = jj; ii < vars.size(); ++ii) {
          double s = 0.0;
          for (const auto& e : *vars[ii].entries) s += e.v * G(e.c, e.r);
          M(vars[ii].var, j) += s;
        }
      }
    }
    // Variables are listed in increasing order per block, so only the lower
    // triangle was filled.
    M.triangularView<Eigen::StrictlyUpper>() = M.transpose();

    double diag_max = 0.0;
    for (int i = 0; i < m; ++i) diag_max = std::max(diag_max, M(i, i));
    Eigen::LLT<RMat> mf(M);
    Eigen::LDLT<RMat> mldlt;
    bool use_ldlt = false;
    if (mf.info() != Eigen::Success) {
      RMat Mr = M;
      Mr.diagonal().array() += 1e-12 * std::max(1.0, diag_max);
      mldlt.compute(Mr);
      use_ldlt = true;
    }
    auto solveM = [&](const RVec& r) -> RVec { return use_ldlt ? RVec(mldlt.solve(r)) : RVec(mf.solve(r)); };

    std::vector<RMat> XRdSi(static_cast<std::size_t>(nb));
    for (int bi = 0; bi < nb; ++bi) XRdSi[bi] = X[bi] * Rd[bi] * Sinv[bi];
    const RVec AXRdSi = apply_A(p, XRdSi);

    auto direction = [&](const std::vector<RMat>& RcSi, RVec& dy, std::vector<RMat>& dX,
                         std::vector<RMat>& dS) {
      const RVec rhs = Rp - apply_A(p, RcSi) + AXRdSi;
      dy = solveM(rhs);
      dS = apply_At(p, dy);
      dX.resize(static_cast<std::size_t>(nb));
      for (int bi = 0; bi < nb; ++bi) {
        dS[bi] = Rd[bi] - dS[bi];
        dX[bi] = sym(RcSi[bi] - X[bi] * dS[bi] * Sinv[bi]);
      }
    };
    auto steps = [&](const std::vector<RMat>& dX, const std::vector<RMat>& dS, double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = std::numeric_limits<double>::infinity();
      for (int bi = 0; bi < nb; ++bi) {
        ap = std::min(ap, max_step(X[bi], dX[bi]));
        ad = std::min(ad, max_step(S[bi], dS[bi]));
      }
    };

    // Predictor: Rc = -XS, so Rc S^-1 = -X.
    std::vector<RMat> RcSi(static_cast<std::size_t>(nb));
    for (int bi = 0; bi < nb; ++bi) RcSi[bi] = -X[bi];
    RVec dy;
    std::vector<RMat> dX, dS;
    direction(RcSi, dy, dX, dS);
    double ap, ad;
    steps(dX, dS, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double xs_aff = 0.0;
    for (int bi = 0; bi < nb; ++bi) xs_aff += frob(X[bi] + ap * dX[bi], S[bi] + ad * dS[bi]);
    double sigma = std::pow(std::max(0.0, xs_aff) / std::max(xs, 1e-300), 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector: Rc = sigma mu I - XS - dXa dSa.
    for (int bi = 0; bi < nb; ++bi)
      RcSi[bi] = sigma * mu * Sinv[bi] - X[bi] - dX[bi] * dS[bi] * Sinv[bi];
    direction(RcSi, dy, dX, dS);
    steps(dX, dS, ap, ad);
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!std::isfinite(ap) || !std::isfinite(ad) || (ap < 1e-12 && ad < 1e-12)) {
      res.message = "step length collapsed";
      break;
    }
    for (int bi = 0; bi < nb; ++bi) {
      X[bi] = sym(X[bi] + ap * dX[bi]);
      S[bi] = sym(S[bi] + ad * dS[bi]);
    }
    y += ad * dy;
    res.iterations = it + 1;
  }
  if (!res.converged && best.merit <= 10 * tol) {
    X = std::move(best.X);
    S = std::move(best.S);
    y = best.y;
    res.pobj = best.pobj;
    res.dobj = best.dobj;
    res.pinf = best.pinf;
    res.dinf = best.dinf;
    res.gap = best.gap;
    res.converged = true;
    res.message = "converged to reduced accuracy";
  }
  if (!res.converged && res.message.empty()) res.message = "iteration cap reached";
  res.y = y;
  res.X = std::move(X);
  res.S = std::move(S);
  return res;
}

}  // namespace matrange::sdp::detail
