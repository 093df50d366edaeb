#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "matrange/error.hpp"
#include "matrange/lanczos.hpp"
#include "matrange/parallel.hpp"
#include "matrange/ranges.hpp"
#include "matrange/sphere.hpp"

namespace matrange {

namespace {

constexpr int kDenseEigenLimit = 96;
// Directions are processed in fixed chunks so warm starts, and hence outputs, do
// not depend on the thread count.
constexpr int kChunk = 48;

void require_sa(const MatrixTuple& A) {
  require(A.d() >= 1 && A.n() >= 1, ErrorKind::dimension, "empty tuple");
  require(A.selfadjoint, ErrorKind::precondition, "selfadjoint tuple required (realify first)");
}

// Joint eigenvalues (one row per common eigenvector) when the A_i commute, so
// that W_1(A) is their convex hull; empty otherwise.
RMat joint_spectrum(const MatrixTuple& A) {
  const int d = A.d(), N = A.n();
  if (d == 1) return RMat();
  CVec v(N);
  for (int k = 0; k < N; ++k) v(k) = cplx(std::sin(1.0 + 0.7 * k), std::cos(0.3 + 1.3 * k));
  v.normalize();
  double scale = 0.0;
  for (const auto& M : A.mats) scale = std::max(scale, M.norm());
  if (scale == 0.0) return RMat();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if ((A[i] * (A[j] * v) - A[j] * (A[i] * v)).norm() > 1e-10 * scale * scale) return RMat();
  RVec c(d);
  for (int i = 0; i < d; ++i) c(i) = 1.0 / std::sqrt(i + 2.0) + 0.1 * i;
  Eigen::SelfAdjointEigenSolver<CMat> es(combination(A, c));
  const CMat& V = es.eigenvectors();
  RMat out(N, d);
  for (int i = 0; i < d; ++i) {
    CMat D = V.adjoint() * A[i] * V;
    out.col(i) = D.diagonal().real();
    D.diagonal().setZero();
    if (D.norm() > 1e-9 * scale) return RMat();
  }
  return out;
}

}  // namespace

double support_level1(const MatrixTuple& A, const RVec& theta) {
  require_sa(A);
  require(theta.size() == A.d(), ErrorKind::dimension, "direction length != d");
  return lambda_max(combination(A, theta));
}

SupportCloud boundary_level1(const MatrixTuple& A, int K, std::uint64_t seed) {
  require(K >= 8, ErrorKind::precondition, "boundary_level1 needs K >= 8");
  return boundary_level1(A, sphere_directions(A.d(), K, seed));
}

SupportCloud boundary_level1(const MatrixTuple& A, const RMat& directions) {
  require_sa(A);
  require(directions.cols() == A.d(), ErrorKind::dimension, "direction length != d");
  const int K = static_cast<int>(directions.rows());
  const int d = A.d(), N = A.n();
  SupportCloud out;
  out.directions = directions;
  out.values.resize(K);
  out.points.resize(K, d);

  auto finish = [&](int k, const CVec& v) {
    for (int i = 0; i < d; ++i) out.points(k, i) = v.dot(A[i] * v).real();
    // v^* (sum theta_i A_i) v from the point itself keeps value and point consistent.
    out.values(k) = directions.row(k).dot(out.points.row(k));
  };

  if (const RMat J = joint_spectrum(A); J.size()) {
    for (int k = 0; k < K; ++k) {
      Eigen::Index best = 0;
      (J * directions.row(k).transpose()).maxCoeff(&best);
      out.points.row(k) = J.row(best);
      out.values(k) = directions.row(k).dot(out.points.row(k));
    }
    return out;
  }

  const int chunks = (K + kChunk - 1) / kChunk;
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    const int begin = static_cast<int>(c) * kChunk, end = std::min(K, begin + kChunk);
    CVec warm;
    for (int k = begin; k < end; ++k) {
      const CMat M = combination(A, directions.row(k).transpose());
      if (N <= kDenseEigenLimit) {
        Eigen::SelfAdjointEigenSolver<CMat> es(M);
        finish(k, es.eigenvectors().col(N - 1));
        continue;
      }
      LanczosOptions opt;
      opt.tol = 1e-9;
      const EigenPair e = lanczos_largest(dense_operator(M), N, warm.size() ? &warm : nullptr, opt);
      warm = e.vector;
      finish(k, e.vector.normalized());
    }
  });
  return out;
}

CMat choi_apply(const CMat& C, int N, const CMat& M) {
  require(N >= 1 && C.rows() % N == 0 && C.rows() == C.cols(), ErrorKind::dimension, "Choi matrix shape");
  require(M.rows() == N && M.cols() == N, ErrorKind::dimension, "Choi input size");
  const Eigen::Index n = C.rows() / N;
  CMat out = CMat::Zero(n, n);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      if (M(j, k) != cplx(0.0, 0.0)) out += M(j, k) * C.block(j * n, k * n, n, n);
  return out;
}

MatrixTuple choi_apply(const CMat& C, int N, const MatrixTuple& A) {
  MatrixTuple out;
  out.selfadjoint = A.selfadjoint;
  for (const auto& M : A.mats) out.mats.push_back(choi_apply(C, N, M));
  if (out.selfadjoint)
    for (auto& M : out.mats) M = hermitian_part(M);
  return out;
}

LevelSupport support_leveln(const MatrixTuple& A, const MatrixTuple& B, double tol) {
  require(A.d() == B.d(), ErrorKind::dimension, "direction and generator differ in d");
  require(A.d() >= 1 && A.n() >= 1 && B.n() >= 1, ErrorKind::dimension, "empty tuple");
  const int N = A.n(), n = B.n();
  require(N * n <= kMaxMembershipSize, ErrorKind::precondition, "support_leveln: N*n above cap");
  CMat G = CMat::Zero(N * n, N * n);
  for (int i = 0; i < A.d(); ++i) G += kron(A[i].transpose(), B[i].adjoint());
  G = hermitian_part(G);

  const auto coords = sdp::hermitian_coordinates(n);
  sdp::SdpProblem p;
  p.num_vars = static_cast<int>(coords.size());
  p.objective = RVec::Zero(p.num_vars);
  sdp::LmiConstraint lmi;
  lmi.constant = -G;
  for (int k = 0; k < p.num_vars; ++k) {
    const auto& b = coords[static_cast<std::size_t>(k)];
    sdp::SparseHermitian c;
    for (int j = 0; j < N; ++j) sdp::place(c, b, j * n);
    lmi.coefficients.push_back(std::move(c));
    for (const auto& e : b.entries)
      if (e.row == e.col) p.objective(k) += e.value.real();
  }
  p.lmis = {lmi};
  const auto s = sdp::solve_sdp(p, tol);
  if (s.status != sdp::Status::optimal) fail(ErrorKind::numerical, "support_leveln: solver " + s.message);
  LevelSupport out;
  out.value = s.objective;
  out.choi = hermitian_part(s.dual[0]);
  out.maximizer = choi_apply(out.choi, N, A);
  return out;
}

HausdorffEstimate hausdorff_levels(const MatrixTuple& A1, const MatrixTuple& A2, int n, int K, double tol,
                                   std::uint64_t seed) {
  require_sa(A1);
  require_sa(A2);
  require(A1.d() == A2.d(), ErrorKind::dimension, "generators differ in d");
  require(n >= 1 && K >= 1, ErrorKind::precondition, "hausdorff_levels needs n >= 1 and K >= 1");
  const int d = A1.d();
  HausdorffEstimate out;
  out.directions = K;
  if (n == 1) {
    const RMat dirs = sphere_directions(d, K, seed);
    for (int k = 0; k < K; ++k) {
      const RVec t = dirs.row(k).transpose();
      out.estimate = std::max(out.estimate, std::abs(support_level1(A1, t) - support_level1(A2, t)));
    }
    // |h(u) - h(u')| <= R |u - u'| with R bounding the body.
    auto radius = [](const MatrixTuple& A) {
      double s = 0.0;
      for (const auto& M : A.mats) s += std::pow(op_norm(M), 2);
      return std::sqrt(s);
    };
    if (d == 1)
      out.discretization = (K >= 2) ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    else if (d == 2)
      out.discretization = (radius(A1) + radius(A2)) * circle_covering_radius(dirs);
    else
      out.discretization = std::numeric_limits<double>::quiet_NaN();
  } else {
    const auto dirs = hermitian_directions(d, n, K, seed);
    std::vector<double> diff(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t k) {
      diff[k] = std::abs(support_leveln(A1, dirs[k], tol).value - support_leveln(A2, dirs[k], tol).value);
    });
    for (double v : diff) out.estimate = std::max(out.estimate, v);
    out.discretization = std::numeric_limits<double>::quiet_NaN();
  }
  // ||X||_row <= ||X||_HS <= sqrt(n) ||X||_row.
  out.op_lower = out.estimate / std::sqrt(static_cast<double>(n));
  out.op_upper = std::isnan(out.discretization) ? std::numeric_limits<double>::quiet_NaN()
                                                : out.estimate + out.discretization;
  return out;
}

bool spectrahedron_membership(const MatrixTuple& A, const MatrixTuple& X, double tol) {
  require(A.d() == X.d(), ErrorKind::dimension, "spectrahedron: d mismatch");
  require(A.d() >= 1, ErrorKind::dimension, "empty tuple");
  return lambda_max(hermitian_part(pairing(X, A))) <= 1.0 + tol;
}

InclusionCheck scale_inclusion_factor(const SupportOracle& E, const SupportOracle& F,
                                      const std::vector<MatrixTuple>& directions, double r, double eps) {
  require(r > 0.0 && eps > 0.0, ErrorKind::precondition, "inclusion factor needs r > 0 and eps > 0");
  require(!directions.empty(), ErrorKind::precondition, "no directions");
  InclusionCheck out;
  out.factor = (r + eps) / r;
  std::vector<double> he, hf;
  for (const auto& B : directions) {
    he.push_back(E(B));
    hf.push_back(F(B));
    require(he.back() >= r * (1.0 - 1e-12) && hf.back() >= r * (1.0 - 1e-12), ErrorKind::precondition,
            "ball hypothesis fails: a support value is below r");
    out.hausdorff_estimate = std::max(out.hausdorff_estimate, std::abs(he.back() - hf.back()));
  }
  out.hypothesis = out.hausdorff_estimate < eps;
  if (out.hypothesis) {
    out.verified = true;
    for (std::size_t k = 0; k < he.size(); ++k)
      if (hf[k] > out.factor * he[k] + 1e-12) out.verified = false;
  }
  return out;
}

}  // namespace matrange
