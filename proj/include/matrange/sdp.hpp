#pragma once

#include <functional>
#include <string>
#include <vector>

#include "matrange/linalg.hpp"

namespace matrange::sdp {

// Hermitian coefficient stored as its nonzero entries (both triangles).
struct SparseHermitian {
  struct Entry {
    int row, col;
    cplx value;
  };
  std::vector<Entry> entries;

  static SparseHermitian from_dense(const CMat& M, double drop = 0.0);
  void add(int row, int col, cplx value);  // adds value at (row,col) and conj at (col,row)
  void add_diagonal(int row, double value);
  CMat dense(int size) const;
  bool empty() const { return entries.empty(); }
};

// Real coordinates of the n x n Hermitian matrices (diagonal units, then
// symmetric and, unless real_only, antisymmetric imaginary off-diagonal pairs).
std::vector<SparseHermitian> hermitian_coordinates(int n, bool real_only = false);
// sum_k y(first + k) * coords[k] as a dense n x n matrix.
CMat assemble(const std::vector<SparseHermitian>& coords, const RVec& y, int first, int n);
// Copies the entries of src into dst shifted by offset along the diagonal, scaled.
void place(SparseHermitian& dst, const SparseHermitian& src, int offset, cplx scale = 1.0);

// F0 + sum_k y_k F_k >= 0. `coefficients` has one entry per decision variable.
struct LmiConstraint {
  CMat constant;
  std::vector<SparseHermitian> coefficients;

  int size() const { return static_cast<int>(constant.rows()); }
};

struct SdpProblem {
  int num_vars = 0;
  RVec objective;  // minimize objective . y
  std::vector<LmiConstraint> lmis;
  RMat eq_matrix;  // optional: eq_matrix * y = eq_rhs
  RVec eq_rhs;
  RVec lower;  // optional box, size 0 or num_vars; +-inf allowed
  RVec upper;
};

enum class Status { optimal, infeasible, feasible_point, numerical_failure };
const char* to_string(Status s);

struct SdpSolution {
  Status status = Status::numerical_failure;
  RVec y;
  double objective = 0.0;       // objective . y
  double dual_objective = 0.0;  // lower bound from the dual certificate
  // Optimal: dual matrices (one per LMI). Infeasible: Farkas certificate with
  // <F_k, X> = 0 and <F_0, X> < 0 (relative to the equality-reduced problem).
  std::vector<CMat> dual;
  double max_violation = 0.0;  // max(0, -lambda_min) over LMIs, plus equality residual
  int iterations = 0;
  std::string message;
};

struct SolverOptions {
  double tol = 1e-7;
  int max_iterations = 500;
  bool phase_one_on_failure = true;
};

void validate(const SdpProblem& p);

SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& opt = {});
SdpSolution solve_sdp(const SdpProblem& problem, double tol);

// Phase I: maximize t s.t. F(y) - tI >= 0 on every LMI (t capped at 1).
// Status infeasible (with certificate) when t* < -tol, feasible_point otherwise.
SdpSolution find_feasible_point(const SdpProblem& problem, const SolverOptions& opt = {});

struct ProjectionResult {
  bool converged = false;
  RVec y;
  double min_eig = 0.0;
  int iterations = 0;
};
// Feasibility by alternating projection onto the PSD cone and the affine image.
ProjectionResult alternating_projections(const SdpProblem& problem, int max_iterations = 2000,
                                         double tol = 1e-7);

CMat lmi_value(const LmiConstraint& lmi, const RVec& y);
double lmi_min_eig(const LmiConstraint& lmi, const RVec& y);

// Least lambda in [lo, hi] with oracle(lambda) true, to within tol.
double bisect_feasibility(const std::function<bool(double)>& oracle, double lo, double hi,
                          double tol);

}  // namespace matrange::sdp
