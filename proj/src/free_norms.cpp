#include "matrange/free_norms.hpp"

#include <cmath>

#include "matrange/error.hpp"
#include "matrange/sdp.hpp"

namespace matrange {

namespace {

using sdp::LmiConstraint;
using sdp::SdpProblem;
using sdp::SparseHermitian;
using sdp::place;

bool all_real(const MatrixTuple& X) {
  for (const auto& M : X.mats)
    if (M.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

// Variables: [s, z_1 .. z_K]. With lambda_var the first variable is lambda
// (coefficient +I on the top-left block); otherwise lambda is a constant and the
// first variable is a slack t with coefficient -I on both LMIs.
SdpProblem lehner_problem(const MatrixTuple& X, const std::vector<SparseHermitian>& coords, double eps,
                          bool lambda_var, double lambda) {
  const int n = X.n(), d = X.d();
  const int K = static_cast<int>(coords.size());
  SdpProblem p;
  p.num_vars = 1 + K;
  p.objective = RVec::Zero(1 + K);
  p.objective(0) = lambda_var ? 1.0 : -1.0;

  LmiConstraint schur;
  const int size = n * (d + 1);
  schur.constant = CMat::Zero(size, size);
  for (int i = 0; i < d; ++i) {
    schur.constant.block(0, n * (i + 1), n, n) = X[i];
    schur.constant.block(n * (i + 1), 0, n, n) = X[i].adjoint();
  }
  schur.coefficients.resize(static_cast<std::size_t>(1 + K));
  if (lambda_var) {
    for (int r = 0; r < n; ++r) schur.coefficients[0].add_diagonal(r, 1.0);
  } else {
    schur.constant.topLeftCorner(n, n) += lambda * CMat::Identity(n, n);
    for (int r = 0; r < size; ++r) schur.coefficients[0].add_diagonal(r, -1.0);
  }
  for (int k = 0; k < K; ++k) {
    auto& c = schur.coefficients[static_cast<std::size_t>(1 + k)];
    place(c, coords[static_cast<std::size_t>(k)], 0, -1.0);
    for (int i = 1; i <= d; ++i) place(c, coords[static_cast<std::size_t>(k)], n * i, 1.0);
  }

  LmiConstraint pos;
  pos.constant = -eps * CMat::Identity(n, n);
  pos.coefficients.resize(static_cast<std::size_t>(1 + K));
  if (!lambda_var)
    for (int r = 0; r < n; ++r) pos.coefficients[0].add_diagonal(r, -1.0);
  for (int k = 0; k < K; ++k) pos.coefficients[static_cast<std::size_t>(1 + k)] = coords[static_cast<std::size_t>(k)];

  p.lmis = {schur, pos};
  if (!lambda_var) {
    const double inf = std::numeric_limits<double>::infinity();
    p.lower = RVec::Constant(1 + K, -inf);
    p.upper = RVec::Constant(1 + K, inf);
    p.upper(0) = 1.0;
  }
  return p;
}

}  // namespace

double lehner_upper_bound(const MatrixTuple& X, const CMat& Z) {
  require(Z.rows() == X.n() && Z.cols() == X.n(), ErrorKind::dimension, "Z must match the tuple level");
  require(is_hermitian(Z, 1e-10), ErrorKind::precondition, "Z must be Hermitian");
  const CMat Zh = hermitian_part(Z);
  Eigen::LLT<CMat> llt(Zh);
  require(llt.info() == Eigen::Success && lambda_min(Zh) > 0.0, ErrorKind::precondition,
          "Z must be positive definite");
  CMat M = Zh;
  for (const auto& Xi : X.mats) M += Xi * llt.solve(Xi);
  return lambda_max(hermitian_part(M));
}

double diag_upper_bound(const MatrixTuple& X, const RVec& z) {
  require(z.size() == X.n(), ErrorKind::dimension, "diagonal length must match the tuple level");
  require((z.array() > 0.0).all(), ErrorKind::precondition, "Z must be positive");
  return lehner_upper_bound(X, z.cast<cplx>().asDiagonal().toDenseMatrix());
}

LehnerResult lehner_semicircular(const MatrixTuple& X, const LehnerOptions& opt) {
  require(X.d() >= 1 && X.n() >= 1, ErrorKind::dimension, "empty tuple");
  require(X.selfadjoint, ErrorKind::precondition, "lehner norm needs a selfadjoint tuple");
  require(X.n() <= kMaxLehnerLevel, ErrorKind::precondition, "lehner norm: level above cap");
  LehnerResult res;
  res.rho = std::sqrt(std::max(0.0, lambda_max(sum_squares(X))));
  if (res.rho == 0.0) {
    res.Z = CMat::Identity(X.n(), X.n());
    return res;
  }
  const int n = X.n();
  const double rho = res.rho;
  const MatrixTuple Xn = scaled(X, 1.0 / rho);
  const bool real = opt.real_z_when_real && all_real(X);
  const auto coords = sdp::hermitian_coordinates(n, real);
  const double hi_max = 2.0;
  const double eps = opt.eps_factor * hi_max;
  res.epsilon = eps * rho;
  const double tol = opt.tol / rho;

  // Direct minimization brackets the threshold; the bisection then certifies it.
  sdp::SolverOptions so;
  so.tol = std::clamp(0.1 * tol, 1e-10, 1e-6);
  const auto direct = sdp::solve_sdp(lehner_problem(Xn, coords, eps, true, 0.0), so);
  double estimate = 1.5;
  if (direct.status == sdp::Status::optimal) {
    estimate = direct.y(0);
    res.dual_lower = rho * direct.dual_objective;
  }

  CMat best_z = CMat::Identity(n, n);
  double best_upper = lehner_upper_bound(Xn, best_z);
  auto oracle = [&](double lambda) {
    ++res.oracle_calls;
    const auto s = sdp::solve_sdp(lehner_problem(Xn, coords, eps, false, lambda), so);
    if (s.status != sdp::Status::optimal && s.status != sdp::Status::feasible_point) return false;
    if (s.y(0) < -so.tol) return false;
    const CMat Z = sdp::assemble(coords, s.y, 1, n);
    if (lambda_min(Z) <= 0.0) return false;
    const double u = lehner_upper_bound(Xn, Z);
    if (u < best_upper) {
      best_upper = u;
      best_z = Z;
    }
    return u <= lambda * (1.0 + 1e-12);
  };

  const double w = std::max(20.0 * tol, 1e-6);
  double lo = std::max(1.0 - 1e-9, estimate - w);
  double hi = std::min(hi_max * (1.0 + 1e-9), estimate + w);
  if (!oracle(hi)) hi = hi_max * (1.0 + 1e-9);
  if (lo >= hi || oracle(lo)) lo = 1.0 - 1e-9;
  double value = hi;
  if (oracle(lo)) {
    // Only possible when the threshold is at the lower bound rho itself.
    value = lo;
  } else {
    value = sdp::bisect_feasibility(oracle, lo, hi, tol);
  }
  res.value = rho * value;
  res.certified_upper = rho * best_upper;
  res.Z = rho * best_z;
  return res;
}

double lehner_semicircular_norm(const MatrixTuple& X, double tol) {
  LehnerOptions o;
  o.tol = tol;
  return lehner_semicircular(X, o).value;
}

double lehner_scalar_semicircular(const RVec& x) { return 2.0 * x.norm(); }

Minimum1D lehner_scalar_haar_min(const RVec& x) {
  const double d = static_cast<double>(x.size());
  require(x.size() >= 1, ErrorKind::dimension, "empty vector");
  const RVec a = x.cwiseAbs();
  auto g = [&](double t) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += std::hypot(t, a(i));
    return s - (d - 1.0) * t;
  };
  const double scale = std::max(a.maxCoeff(), 1e-300);
  Minimum1D m = minimize_convex(g, 1e-12 * scale, scale);
  const double at0 = a.sum();
  if (at0 <= m.value) m = {0.0, at0};
  m.value = std::abs(m.value);
  return m;
}

double lehner_scalar_haar(const RVec& x) {
  if (x.size() >= 1 && x.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  return lehner_scalar_haar_min(x).value;
}

Minimum1D shifted_shift_norm(int d) {
  require(d >= 1, ErrorKind::precondition, "shifted_shift_norm needs d >= 1");
  const double dd = d;
  auto f = [dd](double t) { return std::abs(t + dd + dd / (t - 1.0)); };
  return minimize_convex(f, 1.0 + 1e-12, 2.0);
}

std::pair<double, double> semicircular_rownorm_bound(const MatrixTuple& X, double tol) {
  const double v = lehner_semicircular_norm(X, tol);
  const double b = 2.0 * std::sqrt(std::max(0.0, lambda_max(sum_squares(X))));
  if (v > b + tol * std::max(1.0, b)) fail(ErrorKind::numerical, "lehner norm exceeds 2 ||sum X_i^2||^{1/2}");
  return {v, b};
}

}  // namespace matrange
