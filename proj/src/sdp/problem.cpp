#include <Eigen/Eigenvalues>
#include <cmath>

#include "matrange/error.hpp"
#include "matrange/sdp.hpp"

namespace matrange::sdp {

SparseHermitian SparseHermitian::from_dense(const CMat& M, double drop) {
  SparseHermitian s;
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      if (std::abs(M(i, j)) > drop) s.entries.push_back({static_cast<int>(i), static_cast<int>(j), M(i, j)});
  return s;
}

void SparseHermitian::add(int row, int col, cplx value) {
  if (value == cplx(0.0, 0.0)) return;
  if (row == col) {
    entries.push_back({row, col, cplx(value.real(), 0.0)});
    return;
  }
  entries.push_back({row, col, value});
  entries.push_back({col, row, std::conj(value)});
}

void SparseHermitian::add_diagonal(int row, double value) {
  if (value != 0.0) entries.push_back({row, row, cplx(value, 0.0)});
}

CMat SparseHermitian::dense(int size) const {
  CMat M = CMat::Zero(size, size);
  for (const auto& e : entries) M(e.row, e.col) += e.value;
  return M;
}

std::vector<SparseHermitian> hermitian_coordinates(int n, bool real_only) {
  std::vector<SparseHermitian> out;
  for (int j = 0; j < n; ++j) {
    SparseHermitian s;
    s.add_diagonal(j, 1.0);
    out.push_back(s);
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      SparseHermitian s;
      s.add(j, k, 1.0);
      out.push_back(s);
      if (!real_only) {
        SparseHermitian t;
        t.add(j, k, cplx(0.0, 1.0));
        out.push_back(t);
      }
    }
  return out;
}

CMat assemble(const std::vector<SparseHermitian>& coords, const RVec& y, int first, int n) {
  CMat Z = CMat::Zero(n, n);
  for (std::size_t k = 0; k < coords.size(); ++k)
    for (const auto& e : coords[k].entries) Z(e.row, e.col) += y(first + static_cast<Eigen::Index>(k)) * e.value;
  return Z;
}

void place(SparseHermitian& dst, const SparseHermitian& src, int offset, cplx scale) {
  for (const auto& e : src.entries) dst.entries.push_back({e.row + offset, e.col + offset, scale * e.value});
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::feasible_point: return "feasible-point";
    case Status::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

void validate(const SdpProblem& p) {
  require(p.num_vars >= 0, ErrorKind::dimension, "negative variable count");
  require(p.objective.size() == p.num_vars, ErrorKind::dimension, "objective length != num_vars");
  for (const auto& lmi : p.lmis) {
    const int b = lmi.size();
    require(lmi.constant.rows() == lmi.constant.cols() && b > 0, ErrorKind::dimension,
            "LMI constant must be square and nonempty");
    require(static_cast<int>(lmi.coefficients.size()) == p.num_vars, ErrorKind::dimension,
            "LMI needs one coefficient per variable");
    require(is_hermitian(lmi.constant, 1e-9), ErrorKind::precondition, "LMI constant not Hermitian");
    for (const auto& c : lmi.coefficients)
      for (const auto& e : c.entries)
        require(e.row >= 0 && e.col >= 0 && e.row < b && e.col < b, ErrorKind::dimension,
                "LMI coefficient entry out of range");
  }
  if (p.eq_matrix.rows() > 0) {
    require(p.eq_matrix.cols() == p.num_vars, ErrorKind::dimension, "equality matrix width != num_vars");
    require(p.eq_rhs.size() == p.eq_matrix.rows(), ErrorKind::dimension, "equality rhs length mismatch");
  }
  require(p.lower.size() == 0 || p.lower.size() == p.num_vars, ErrorKind::dimension, "lower bound length");
  require(p.upper.size() == 0 || p.upper.size() == p.num_vars, ErrorKind::dimension, "upper bound length");
}

CMat lmi_value(const LmiConstraint& lmi, const RVec& y) {
  CMat M = lmi.constant;
  for (std::size_t k = 0; k < lmi.coefficients.size(); ++k) {
    const double yk = y(static_cast<Eigen::Index>(k));
    if (yk == 0.0) continue;
    for (const auto& e : lmi.coefficients[k].entries) M(e.row, e.col) += yk * e.value;
  }
  return M;
}

double lmi_min_eig(const LmiConstraint& lmi, const RVec& y) {
  const CMat M = lmi_value(lmi, y);
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(M), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double bisect_feasibility(const std::function<bool(double)>& oracle, double lo, double hi,
                          double tol) {
  require(lo < hi, ErrorKind::precondition, "bisection needs lo < hi");
  require(tol > 0.0, ErrorKind::precondition, "bisection needs tol > 0");
  require(!oracle(lo), ErrorKind::precondition, "invalid bracket: oracle(lo) is feasible");
  require(oracle(hi), ErrorKind::precondition, "invalid bracket: oracle(hi) is infeasible");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (oracle(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace matrange::sdp
