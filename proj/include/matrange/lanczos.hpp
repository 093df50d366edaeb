#pragma once

#include <functional>

#include "matrange/linalg.hpp"

namespace matrange {

// out = Op * in for a Hermitian operator.
using LinearOperator = std::function<void(const CVec& in, CVec& out)>;

struct LanczosOptions {
  int krylov_dim = 48;
  int max_restarts = 400;
  double tol = 1e-10;  // residual relative to max(1, |theta|)
};

// Algebraically largest eigenpair of a Hermitian operator, restarted Lanczos with
// full reorthogonalization. `start` may be null or a warm-start vector.
EigenPair lanczos_largest(const LinearOperator& op, Eigen::Index dim, const CVec* start,
                          const LanczosOptions& opt = {});
EigenPair lanczos_smallest(const LinearOperator& op, Eigen::Index dim, const CVec* start,
                           const LanczosOptions& opt = {});
// max(|lambda_max|, |lambda_min|)
double lanczos_norm(const LinearOperator& op, Eigen::Index dim, const LanczosOptions& opt = {});

// Matrix-vector product through the SIMD cgemv kernel.
LinearOperator dense_operator(const CMat& M);

}  // namespace matrange
