#pragma once

// Internal real block-diagonal standard form:
//   (P) min <C, X>  s.t. <A_k, X> = b_k, X >= 0
//   (D) max b . y   s.t. S = C - sum_k y_k A_k >= 0

#include <string>
#include <vector>

#include "matrange/linalg.hpp"

namespace matrange::sdp::detail {

struct Entry {
  int r, c;
  double v;
};

struct VarBlock {
  int block;
  std::vector<Entry> entries;  // full symmetric pattern
};

struct RealSdp {
  std::vector<int> block_sizes;
  std::vector<RMat> C;
  std::vector<std::vector<VarBlock>> A;  // A[k]: nonzero blocks of variable k
  RVec b;

  int num_vars() const { return static_cast<int>(A.size()); }
};

struct IpmResult {
  bool converged = false;
  bool dual_infeasible = false;  // Farkas ray found for (D): X >= 0, A(X) ~ 0, <C,X> < 0
  bool unbounded = false;        // (D) objective unbounded
  RVec y;
  std::vector<RMat> X, S;
  double pobj = 0.0, dobj = 0.0, pinf = 0.0, dinf = 0.0, gap = 0.0;
  int iterations = 0;
  std::string message;
};

IpmResult ipm_solve(const RealSdp& p, double tol, int max_iterations);

RVec apply_A(const RealSdp& p, const std::vector<RMat>& K);
std::vector<RMat> apply_At(const RealSdp& p, const RVec& y);

}  // namespace matrange::sdp::detail
