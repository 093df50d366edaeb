#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "matrange/linalg.hpp"
#include "matrange/sdp.hpp"

namespace matrange {

// ---------------------------------------------------------------- pencils

// p(z) = a0 + sum_i a_i z_i with n x n Hermitian coefficients, evaluated as
// p(X) = a0 (x) I + sum_i a_i (x) X_i.
struct LinearPencil {
  CMat a0;
  std::vector<CMat> a;

  int size() const { return static_cast<int>(a0.rows()); }
  int d() const { return static_cast<int>(a.size()); }
  bool monic(double tol = 1e-12) const;
};

CMat evaluate(const LinearPencil& p, const MatrixTuple& X);
// Spectral norm of p(X).
double pencil_value_norm(const LinearPencil& p, const MatrixTuple& X);

struct PencilNorm {
  double lower = 0.0;  // attained by the returned point (ascent over the row ball)
  double upper = 0.0;  // ||a0|| + min(||sum a_i^2||^{1/2}, lehner(a)/2)
  MatrixTuple argmax;
};

struct PencilNormOptions {
  int starts = 20;
  int iterations = 60;
  std::uint64_t seed = 0;
  // Refine the certified upper bound with the semicircular norm when the row
  // bound alone exceeds this value (the row ball sits inside W(s/2)).
  double refine_above = std::numeric_limits<double>::infinity();
};

// sup { ||p(X)|| : X selfadjoint, ||sum X_i^2|| <= 1 } bracketed.
PencilNorm pencil_norm(const LinearPencil& p, const PencilNormOptions& opt = {});

// ---------------------------------------------------------------- level 1

// lambda_max(sum theta_i A_i)
double support_level1(const MatrixTuple& A, const RVec& theta);

struct SupportCloud {
  int level = 1;
  RMat directions;  // one per row
  RVec values;
  RMat points;      // boundary points (level 1), one per row
  PointCloud cloud() const { return cloud_from_rows(points); }
};

// K sphere directions; boundary point <v, A_i v> from a top eigenvector v of
// sum theta_i A_i. Dense eigensolves for small N, warm-started Lanczos above.
SupportCloud boundary_level1(const MatrixTuple& A, int K, std::uint64_t seed = 0);
// Same points as boundary_level1 for explicit directions (rows).
SupportCloud boundary_level1(const MatrixTuple& A, const RMat& directions);

// ---------------------------------------------------------------- level n

// C = sum_ij E_ij (x) Phi(E_ij);  Phi(M) = Tr_1[(M^T (x) I_n) C].
CMat choi_apply(const CMat& C, int N, const CMat& M);
MatrixTuple choi_apply(const CMat& C, int N, const MatrixTuple& A);

enum class Verdict { inside, outside, numerical_failure };
const char* to_string(Verdict v);

struct MembershipOptions {
  double tol = 1e-7;
  // Commuting diagonal generators: parametrize by a POVM over the joint
  // eigenvalues instead of the full Choi matrix.
  bool use_povm_when_diagonal = true;
  bool build_pencil = false;  // attach an Effros-Winkler pencil on "outside"
};

struct MembershipResult {
  Verdict verdict = Verdict::numerical_failure;
  double distance = 0.0;        // min_t of the distance SDP (upper estimate of d(X, W_n(A)))
  double distance_lower = 0.0;  // dual objective: certified lower bound
  CMat choi;                    // witness (inside) or best map found
  MatrixTuple image;            // Phi(A)
  double witness_residual = 0.0;
  std::optional<LinearPencil> pencil;
  std::string message;
};

inline constexpr int kMaxMembershipSize = 400;   // N * n
inline constexpr int kMaxMembershipVars = 4000;  // real SDP variables

MembershipResult membership(const MatrixTuple& A, const MatrixTuple& X, const MembershipOptions& opt = {});

struct LevelSupport {
  double value = 0.0;
  MatrixTuple maximizer;
  CMat choi;
};
// max Re sum tr(B_i^* X_i) over X in W_n(A), via min tr Y s.t. I_N (x) Y >= Herm(sum A_i^T (x) B_i^*).
LevelSupport support_leveln(const MatrixTuple& A, const MatrixTuple& B, double tol = 1e-7);

struct HausdorffEstimate {
  double estimate = 0.0;        // max over sampled HS-unit directions of |h1 - h2|
  double discretization = 0.0;  // added to estimate for a bound (NaN when not certified)
  double op_lower = 0.0;        // envelope for the row-operator metric
  double op_upper = 0.0;
  int directions = 0;
};
// Levelwise Hausdorff distance in the Hilbert-Schmidt metric between the ranges
// of two selfadjoint tuples with the same d.
HausdorffEstimate hausdorff_levels(const MatrixTuple& A1, const MatrixTuple& A2, int n, int K, double tol = 1e-7,
                                   std::uint64_t seed = 0);

// lambda_max(Re sum X_i (x) A_i) <= 1 + tol (selfadjoint variant drops Re).
bool spectrahedron_membership(const MatrixTuple& A, const MatrixTuple& X, double tol = 1e-9);

// ---------------------------------------------------------------- separation

struct EffrosWinkler {
  bool separated = false;
  double value = 0.0;  // optimal value of the normalized separation SDP (< 0 iff separated)
  LinearPencil pencil;  // monic, p >= 0 on c W(xi), p(X) not PSD
};
// Monic pencil separating X from c * W(xi).
EffrosWinkler effros_winkler_pencil(const MatrixTuple& xi, const MatrixTuple& X, double c = 1.0,
                                    double tol = 1e-8);

struct SeparationOptions {
  double tol = 1e-8;
  int samples = 64;  // sampled members V^*(xi (x) I_k)V of W_n(xi)
  std::uint64_t seed = 0;
  bool force_fattening = false;
  PencilNormOptions norm;
};

struct SeparationResult {
  LinearPencil pencil;  // q~
  LinearPencil monic;   // p
  double delta = 0.0;
  double eps = 0.0, R = 0.0, r = 0.0;  // constants actually used
  bool fattened = false;
  double value_at_A = 0.0;          // ||q~(A)||
  double certified_margin = 0.0;    // ||q~(A)|| - ||q~(xi)||
  double sampled_margin = 0.0;      // ||q~(A)|| - max over samples ||q~(X)||
  PencilNorm norm;
  MatrixTuple generator;            // xi, or its fattening
};

// Effective separation: given d(A, W_n(xi)) > eps (certified by the membership
// SDP), W(xi) inside R * row ball and r * row ball inside W(xi), returns q~ with
// ||q~|| <= 1 and ||q~(A)|| - ||q~(X)|| >= eps / (2R(2R+1)(1+1/r)) on W_n(xi).
// Without a valid r the generator is fattened: xi' = (+) (xi + v I) over
// v = +-(eps/2) e_i, and the constants become (eps/2, R + eps/2, eps/(2d)).
SeparationResult separating_pencil(const MatrixTuple& xi, const MatrixTuple& A, double eps, double R, double r,
                                   const SeparationOptions& opt = {});
double separation_delta(double eps, double R, double r);

// Sampled members V^*(xi (x) I_k) V of W_n(xi) (random isometries V).
std::vector<MatrixTuple> sample_range_members(const MatrixTuple& xi, int n, int count, std::uint64_t seed);

// ---------------------------------------------------------------- inclusion

using SupportOracle = std::function<double(const MatrixTuple& direction)>;

struct InclusionCheck {
  double factor = 1.0;               // (r + eps) / r
  double hausdorff_estimate = 0.0;   // max |h_E - h_F| over the directions
  bool hypothesis = false;           // estimate < eps
  bool verified = false;             // h_F <= factor * h_E on every direction (when hypothesis)
};
// Throws when either body fails the ball hypothesis (support < r somewhere).
InclusionCheck scale_inclusion_factor(const SupportOracle& E, const SupportOracle& F,
                                      const std::vector<MatrixTuple>& directions, double r, double eps);

}  // namespace matrange
