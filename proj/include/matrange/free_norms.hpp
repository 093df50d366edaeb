#pragma once

#include <utility>

#include "matrange/linalg.hpp"
#include "matrange/optimize1d.hpp"

namespace matrange {

struct LehnerOptions {
  double tol = 1e-7;
  // Z >= eps I with eps = eps_factor * (upper bracket); the bracket is 2 after
  // normalizing X by ||sum X_i^2||^{1/2}.
  double eps_factor = 1e-7;
  // Restrict Z to real symmetric matrices when every X_i is real (no loss: the
  // feasible set is invariant under entrywise conjugation and convex).
  bool real_z_when_real = true;
};

struct LehnerResult {
  double value = 0.0;      // bisection threshold
  double certified_upper = 0.0;  // ||Z + sum X_i Z^-1 X_i|| for the returned Z
  double dual_lower = 0.0;  // dual objective of the direct SDP
  double rho = 0.0;         // ||sum X_i^2||^{1/2}; rho <= value <= 2 rho
  double epsilon = 0.0;     // regularization used (in the scale of X)
  CMat Z;
  int oracle_calls = 0;
};

// ||sum X_i (x) s_i|| for free semicirculars s_i via
// inf_{Z > 0} ||Z + sum X_i Z^-1 X_i||, bisected over lambda with Z a free LMI
// variable in the Schur form [[lambda I - Z, X_1 .. X_d], [X_i, I_d (x) Z]] >= 0.
LehnerResult lehner_semicircular(const MatrixTuple& X, const LehnerOptions& opt = {});
double lehner_semicircular_norm(const MatrixTuple& X, double tol = 1e-7);

inline constexpr int kMaxLehnerLevel = 60;

// 2 ||x||_2
double lehner_scalar_semicircular(const RVec& x);

// inf_{t > 0} sum_i sqrt(t^2 + x_i^2) - (d-1) t  (= ||Re sum x_i u_i|| for free Haar u_i).
Minimum1D lehner_scalar_haar_min(const RVec& x);
double lehner_scalar_haar(const RVec& x);

// inf_{t > 1} t + d + d/(t-1) = (1 + sqrt d)^2 at t = 1 + sqrt d.
Minimum1D shifted_shift_norm(int d);

// ||Z + sum X_i Z^-1 X_i|| for Z positive definite.
double lehner_upper_bound(const MatrixTuple& X, const CMat& Z);
double diag_upper_bound(const MatrixTuple& X, const RVec& z);

// (lehner norm, 2 ||sum X_i^2||^{1/2}); throws if the first exceeds the second by
// more than tol.
std::pair<double, double> semicircular_rownorm_bound(const MatrixTuple& X, double tol = 1e-7);

}  // namespace matrange
