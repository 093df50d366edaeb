#include "matrange/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "matrange/error.hpp"
#include "matrange/kernels.hpp"

namespace matrange {

namespace {

CVec default_start(Eigen::Index dim) {
  // Deterministic, generic start vector.
  CVec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v(i) = cplx(1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i) + 0.2),
                0.21 * std::cos(0.7 * static_cast<double>(i)));
  return v.normalized();
}

}  // namespace

EigenPair lanczos_largest(const LinearOperator& op, Eigen::Index dim, const CVec* start,
                          const LanczosOptions& opt) {
  require(dim > 0, ErrorKind::dimension, "lanczos needs a positive dimension");
  CVec v = (start != nullptr && start->size() == dim && start->norm() > 0) ? start->normalized()
                                                                           : default_start(dim);
  const int kmax = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, dim));
  CMat V(dim, kmax);
  CVec w(dim);
  EigenPair best;

  auto ritz = [](const RVec& alpha, const RVec& beta, int m) {
    RMat T = RMat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha(i);
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<RMat> es(T);
    return std::make_pair(es.eigenvalues()(m - 1), RVec(es.eigenvectors().col(m - 1)));
  };
  auto converged = [&](double est, double theta) { return est <= opt.tol * std::max(1.0, std::abs(theta)); };

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    RVec alpha = RVec::Zero(kmax), beta = RVec::Zero(kmax);
    V.col(0) = v;
    int k = 0;
    bool early = false;
    for (; k < kmax; ++k) {
      op(V.col(k), w);
      alpha(k) = V.col(k).dot(w).real();
      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        const CVec coeffs = V.leftCols(k + 1).adjoint() * w;
        w.noalias() -= V.leftCols(k + 1) * coeffs;
      }
      const double b = w.norm();
      beta(k) = b;
      if (k + 1 == kmax) break;
      if (b <= 1e-14 * std::max(1.0, std::abs(alpha(k)))) break;
      // Warm starts often converge well inside one cycle.
      if ((k + 1) % 6 == 0) {
        const auto [theta, s] = ritz(alpha, beta, k + 1);
        if (converged(std::abs(b * s(k)), theta)) {
          early = true;
          break;
        }
      }
      V.col(k + 1) = w / b;
    }
    const int m = std::min(k + 1, kmax);
    const auto [theta, s] = ritz(alpha, beta, m);
    v = V.leftCols(m) * s.cast<cplx>();
    v.normalize();
    const double est = std::abs(beta(m - 1) * s(m - 1));
    best.value = theta;
    best.vector = v;
    best.residual = est;
    const bool exhausted = (!early && m < kmax) || (m == dim);
    if (converged(est, theta) || exhausted) break;
  }
  op(best.vector, w);
  best.value = best.vector.dot(w).real();
  best.residual = (w - best.value * best.vector).norm();
  return best;
}

EigenPair lanczos_smallest(const LinearOperator& op, Eigen::Index dim, const CVec* start,
                           const LanczosOptions& opt) {
  LinearOperator neg = [&op](const CVec& in, CVec& out) {
    op(in, out);
    out = -out;
  };
  EigenPair p = lanczos_largest(neg, dim, start, opt);
  p.value = -p.value;
  return p;
}

double lanczos_norm(const LinearOperator& op, Eigen::Index dim, const LanczosOptions& opt) {
  const double hi = lanczos_largest(op, dim, nullptr, opt).value;
  const double lo = lanczos_smallest(op, dim, nullptr, opt).value;
  return std::max(std::abs(hi), std::abs(lo));
}

LinearOperator dense_operator(const CMat& M) {
  return [&M](const CVec& in, CVec& out) {
    out.resize(M.rows());
    kernels::cgemv(M.data(), static_cast<std::size_t>(M.rows()), static_cast<std::size_t>(M.cols()),
                   in.data(), out.data());
  };
}

}  // namespace matrange
