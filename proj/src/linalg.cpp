#include "matrange/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

#include "matrange/error.hpp"
#include "matrange/kernels.hpp"

namespace matrange {

MatrixTuple make_tuple(std::vector<CMat> mats, bool selfadjoint) {
  require(!mats.empty(), ErrorKind::dimension, "tuple needs d >= 1");
  const auto n = mats.front().rows();
  require(n > 0, ErrorKind::dimension, "tuple needs n >= 1");
  for (const auto& M : mats) {
    require(M.rows() == n && M.cols() == n, ErrorKind::dimension,
            "tuple matrices must share one square size");
    if (selfadjoint) require(is_hermitian(M), ErrorKind::precondition, "matrix is not Hermitian");
  }
  MatrixTuple X;
  X.mats = std::move(mats);
  X.selfadjoint = selfadjoint;
  return X;
}

MatrixTuple scalar_point(const RVec& x) {
  std::vector<CMat> mats;
  for (Eigen::Index i = 0; i < x.size(); ++i) mats.push_back(CMat::Constant(1, 1, cplx(x(i), 0.0)));
  return make_tuple(std::move(mats), true);
}

MatrixTuple zero_tuple(int d, int n, bool selfadjoint) {
  return make_tuple(std::vector<CMat>(static_cast<std::size_t>(d), CMat::Zero(n, n)), selfadjoint);
}

MatrixTuple scaled(const MatrixTuple& X, double c) {
  MatrixTuple Y = X;
  for (auto& M : Y.mats) M *= c;
  return Y;
}

namespace {
void check_same_shape(const MatrixTuple& X, const MatrixTuple& Y) {
  require(X.d() == Y.d() && X.n() == Y.n(), ErrorKind::dimension, "tuple shapes differ");
}
}  // namespace

MatrixTuple add(const MatrixTuple& X, const MatrixTuple& Y) {
  check_same_shape(X, Y);
  MatrixTuple Z = X;
  for (int i = 0; i < X.d(); ++i) Z.mats[i] += Y[i];
  Z.selfadjoint = X.selfadjoint && Y.selfadjoint;
  return Z;
}

MatrixTuple subtract(const MatrixTuple& X, const MatrixTuple& Y) {
  check_same_shape(X, Y);
  MatrixTuple Z = X;
  for (int i = 0; i < X.d(); ++i) Z.mats[i] -= Y[i];
  Z.selfadjoint = X.selfadjoint && Y.selfadjoint;
  return Z;
}

MatrixTuple direct_sum(const MatrixTuple& X, const MatrixTuple& Y) {
  require(X.d() == Y.d(), ErrorKind::dimension, "direct sum needs equal d");
  const int a = X.n(), b = Y.n();
  std::vector<CMat> mats;
  for (int i = 0; i < X.d(); ++i) {
    CMat M = CMat::Zero(a + b, a + b);
    M.topLeftCorner(a, a) = X[i];
    M.bottomRightCorner(b, b) = Y[i];
    mats.push_back(std::move(M));
  }
  MatrixTuple Z;
  Z.mats = std::move(mats);
  Z.selfadjoint = X.selfadjoint && Y.selfadjoint;
  return Z;
}

MatrixTuple compress(const MatrixTuple& X, const CMat& V) {
  require(V.rows() == X.n(), ErrorKind::dimension, "isometry rows must equal tuple level");
  MatrixTuple Z;
  Z.selfadjoint = X.selfadjoint;
  for (const auto& M : X.mats) {
    CMat C = V.adjoint() * M * V;
    if (X.selfadjoint) C = hermitian_part(C);
    Z.mats.push_back(std::move(C));
  }
  return Z;
}

bool is_hermitian(const CMat& M, double rel_tol) {
  if (M.rows() != M.cols()) return false;
  const double scale = M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
  const double dev = M.size() == 0 ? 0.0 : (M - M.adjoint()).cwiseAbs().maxCoeff();
  return dev <= rel_tol * (1.0 + scale);
}

CMat hermitian_part(const CMat& M) { return 0.5 * (M + M.adjoint()); }

CMat sum_squares(const MatrixTuple& X) {
  CMat S = CMat::Zero(X.n(), X.n());
  for (const auto& M : X.mats) S.noalias() += M * M.adjoint();
  return S;
}

CMat combination(const MatrixTuple& X, const RVec& c) {
  require(c.size() == X.d(), ErrorKind::dimension, "coefficient length must equal d");
  CMat S = CMat::Zero(X.n(), X.n());
  for (int i = 0; i < X.d(); ++i) S += c(i) * X[i];
  return S;
}

double row_norm(const MatrixTuple& X) {
  require(X.d() > 0 && X.n() > 0, ErrorKind::dimension, "empty tuple");
  const double top = lambda_max(hermitian_part(sum_squares(X)));
  return std::sqrt(std::max(0.0, top));
}

double tuple_distance(const MatrixTuple& X, const MatrixTuple& Y) {
  return row_norm(subtract(X, Y));
}

double hs_norm(const MatrixTuple& X) {
  double s = 0.0;
  for (const auto& M : X.mats) s += M.squaredNorm();
  return std::sqrt(s);
}

double hs_inner(const MatrixTuple& B, const MatrixTuple& X) {
  check_same_shape(B, X);
  double s = 0.0;
  for (int i = 0; i < B.d(); ++i) s += (B[i].adjoint() * X[i]).trace().real();
  return s;
}

CMat kron(const CMat& A, const CMat& B) {
  CMat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

CMat pairing(const MatrixTuple& X, const MatrixTuple& Y) {
  require(X.d() == Y.d(), ErrorKind::dimension, "pairing needs equal d");
  CMat S = CMat::Zero(X.n() * Y.n(), X.n() * Y.n());
  for (int i = 0; i < X.d(); ++i) S += kron(X[i], Y[i]);
  return S;
}

std::vector<double> hermitian_spectrum(const CMat& M) {
  require(is_hermitian(M), ErrorKind::precondition, "hermitian_spectrum needs Hermitian input");
  Eigen::SelfAdjointEigenSolver<CMat> es(M, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::numerical, "eigensolver failed");
  const RVec& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double lambda_max(const CMat& M) {
  Eigen::SelfAdjointEigenSolver<CMat> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double lambda_min(const CMat& M) {
  Eigen::SelfAdjointEigenSolver<CMat> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double op_norm(const CMat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(M);
  return svd.singularValues()(0);
}

namespace {
EigenPair extreme_pair(const CMat& M, bool top) {
  Eigen::SelfAdjointEigenSolver<CMat> es(M);
  require(es.info() == Eigen::Success, ErrorKind::numerical, "eigensolver failed");
  const Eigen::Index k = top ? M.rows() - 1 : 0;
  EigenPair p;
  p.value = es.eigenvalues()(k);
  p.vector = es.eigenvectors().col(k);
  p.residual = (M * p.vector - p.value * p.vector).norm();
  return p;
}
}  // namespace

EigenPair top_eigenpair(const CMat& M) { return extreme_pair(M, true); }
EigenPair bottom_eigenpair(const CMat& M) { return extreme_pair(M, false); }

MatrixTuple realify(const MatrixTuple& X) {
  std::vector<CMat> mats;
  const cplx two_i(0.0, 2.0);
  for (const auto& M : X.mats) {
    mats.push_back(0.5 * (M + M.adjoint()));
    mats.push_back((M - M.adjoint()) / two_i);
  }
  MatrixTuple Y;
  Y.mats = std::move(mats);
  Y.selfadjoint = true;
  return Y;
}

CMat isometry_from(const CMat& G) {
  require(G.cols() <= G.rows(), ErrorKind::dimension, "isometry needs cols <= rows");
  Eigen::HouseholderQR<CMat> qr(G);
  CMat Q = qr.householderQ() * CMat::Identity(G.rows(), G.cols());
  return Q;
}

PointCloud cloud_from_rows(const RMat& rows) {
  PointCloud c;
  c.level = 1;
  for (Eigen::Index p = 0; p < rows.rows(); ++p) c.points.push_back(scalar_point(rows.row(p).transpose()));
  return c;
}

RVec flatten_real(const MatrixTuple& X) {
  const Eigen::Index n2 = static_cast<Eigen::Index>(X.n()) * X.n();
  RVec v(2 * n2 * X.d());
  Eigen::Index k = 0;
  for (const auto& M : X.mats)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      for (Eigen::Index i = 0; i < M.rows(); ++i) {
        v(k++) = M(i, j).real();
        v(k++) = M(i, j).imag();
      }
  return v;
}

namespace {

struct SoaCloud {
  std::size_t npts = 0, dim = 0;
  std::vector<double> data;  // data[k * npts + p]
};

SoaCloud to_soa(const PointCloud& c) {
  SoaCloud s;
  s.npts = c.points.size();
  s.dim = static_cast<std::size_t>(flatten_real(c.points.front()).size());
  s.data.assign(s.npts * s.dim, 0.0);
  for (std::size_t p = 0; p < s.npts; ++p) {
    const RVec v = flatten_real(c.points[p]);
    for (std::size_t k = 0; k < s.dim; ++k) s.data[k * s.npts + p] = v(static_cast<Eigen::Index>(k));
  }
  return s;
}

double directed_euclidean(const SoaCloud& from, const SoaCloud& to) {
  double worst = 0.0;
  std::vector<double> q(from.dim);
  for (std::size_t p = 0; p < from.npts; ++p) {
    for (std::size_t k = 0; k < from.dim; ++k) q[k] = from.data[k * from.npts + p];
    worst = std::max(worst, kernels::min_sq_dist(to.data.data(), to.npts, to.dim, to.npts, q.data()));
  }
  return std::sqrt(worst);
}

double directed_row(const PointCloud& from, const PointCloud& to) {
  double worst = 0.0;
  for (const auto& x : from.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : to.points) best = std::min(best, tuple_distance(x, y));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_cloud(const PointCloud& E, const PointCloud& F) {
  require(!E.points.empty() && !F.points.empty(), ErrorKind::precondition, "empty point cloud");
  require(E.points.size() <= kMaxCloudPoints && F.points.size() <= kMaxCloudPoints,
          ErrorKind::precondition, "point cloud exceeds the 10^4 cap");
  require(E.metric == F.metric, ErrorKind::precondition, "clouds carry different metrics");
  const auto& e0 = E.points.front();
  const auto& f0 = F.points.front();
  require(e0.d() == f0.d() && e0.n() == f0.n(), ErrorKind::dimension, "clouds differ in d or n");
  for (const auto& cloud : {&E, &F})
    for (const auto& p : cloud->points)
      require(p.d() == e0.d() && p.n() == e0.n(), ErrorKind::dimension, "cloud points differ in shape");

  // Row norm and Euclidean distance coincide at level 1.
  if (e0.n() == 1 || E.metric == Metric::hilbert_schmidt) {
    const SoaCloud a = to_soa(E), b = to_soa(F);
    return std::max(directed_euclidean(a, b), directed_euclidean(b, a));
  }
  return std::max(directed_row(E, F), directed_row(F, E));
}

}  // namespace matrange
