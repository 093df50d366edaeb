#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace matrange {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// A d-tuple of n x n complex matrices. Construct through make_tuple() to get the
// shape and Hermitian checks.
struct MatrixTuple {
  std::vector<CMat> mats;
  bool selfadjoint = false;

  int d() const { return static_cast<int>(mats.size()); }
  int n() const { return mats.empty() ? 0 : static_cast<int>(mats.front().rows()); }
  const CMat& operator[](int i) const { return mats[static_cast<std::size_t>(i)]; }
};

MatrixTuple make_tuple(std::vector<CMat> mats, bool selfadjoint);
// Level-1 selfadjoint point with real coordinates x.
MatrixTuple scalar_point(const RVec& x);
MatrixTuple zero_tuple(int d, int n, bool selfadjoint = true);

MatrixTuple scaled(const MatrixTuple& X, double c);
MatrixTuple add(const MatrixTuple& X, const MatrixTuple& Y);
MatrixTuple subtract(const MatrixTuple& X, const MatrixTuple& Y);
MatrixTuple direct_sum(const MatrixTuple& X, const MatrixTuple& Y);
// (V* X_i V)_i for an isometry V (n x k) -> level k.
MatrixTuple compress(const MatrixTuple& X, const CMat& V);

bool is_hermitian(const CMat& M, double rel_tol = 1e-12);
CMat hermitian_part(const CMat& M);

double row_norm(const MatrixTuple& X);
double tuple_distance(const MatrixTuple& X, const MatrixTuple& Y);
double hs_norm(const MatrixTuple& X);
// Re sum tr(B_i^* X_i)
double hs_inner(const MatrixTuple& B, const MatrixTuple& X);

CMat kron(const CMat& A, const CMat& B);
// sum_i X_i (x) Y_i
CMat pairing(const MatrixTuple& X, const MatrixTuple& Y);
// sum_i X_i X_i^*
CMat sum_squares(const MatrixTuple& X);
// sum_i c_i X_i
CMat combination(const MatrixTuple& X, const RVec& c);

std::vector<double> hermitian_spectrum(const CMat& M);
double lambda_max(const CMat& M);
double lambda_min(const CMat& M);
// Largest singular value.
double op_norm(const CMat& M);

struct EigenPair {
  double value = 0.0;
  CVec vector;
  double residual = 0.0;
};
EigenPair top_eigenpair(const CMat& M);
EigenPair bottom_eigenpair(const CMat& M);

MatrixTuple realify(const MatrixTuple& X);

// Random isometry n x k (k <= n) drawn from the columns of a unitary.
CMat isometry_from(const CMat& G);

enum class Metric { row_operator, hilbert_schmidt };

struct PointCloud {
  int level = 1;
  Metric metric = Metric::row_operator;
  std::vector<MatrixTuple> points;
};

// Level-1 cloud from real coordinate rows (one point per row).
PointCloud cloud_from_rows(const RMat& rows);
// Coordinates of a level-1 point in R^(2d) (real parts then imaginary parts per
// variable), or of a level-n point as flattened Hermitian coordinates.
RVec flatten_real(const MatrixTuple& X);

double hausdorff_cloud(const PointCloud& E, const PointCloud& F);

inline constexpr std::size_t kMaxCloudPoints = 10000;

}  // namespace matrange
