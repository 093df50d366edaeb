#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "matrange/ensembles.hpp"
#include "matrange/linalg.hpp"
#include "matrange/ranges.hpp"

namespace matrange {

// The matrix balls over the closed unit ball of R^d:
//   wmin      W^min: tuples with a normal dilation whose joint spectrum lies in the ball
//   fB        sum X_i^2 <= I
//   fD        sum X_i (x) conj(X_i) <= I
//   fB_dual   polar dual of fB
//   wmax      W^max: lambda_max(sum c_i X_i) <= 1 for every unit c
//   lehner    || sum X_i (x) s_i || <= 2
//   W_s_half  matrix range of s/2 (polar dual of lehner)
enum class Ball { wmin, fB, fD, fB_dual, wmax, lehner, W_s_half };
enum class BallAnswer { in, out, unknown };

const char* to_string(Ball b);
const char* to_string(BallAnswer a);
Ball parse_ball(const std::string& s);
const std::vector<Ball>& all_balls();

struct BallCertificate {
  std::string kind = "none";  // eigenpair | direction | decomposition | pencil | dual-point | norm | sandwich
  double value = std::numeric_limits<double>::quiet_NaN();  // quantity compared against the threshold
  RVec direction;            // scalar c with lambda_max(sum c_i X_i) > 1
  CVec vector;               // extremal eigenvector
  RMat atoms;                // decomposition X_i = sum_k atoms(k, i) P_k
  std::vector<CMat> effects;
  std::optional<LinearPencil> pencil;  // p >= 0 on the ball, p(X) not PSD
  std::optional<MatrixTuple> dual_point;  // Y in the dual ball with lambda_max(sum X_i (x) Y_i) > 1
  std::string note;
};

struct BallVerdict {
  Ball ball = Ball::fB;
  BallAnswer answer = BallAnswer::unknown;
  BallCertificate certificate;
  double tol = 0.0;
};

struct BallOptions {
  double tol = 1e-7;
  int directions = 720;   // W^max sphere grid
  int refine = 30;        // ascent steps from the best grid directions
  int atoms = 64;         // W^min atom grid on the sphere
  int dual_level = 2;     // sampled dual points for W(s/2) and fB_dual
  int dual_samples = 16;
  std::uint64_t seed = 0;
};

BallVerdict in_fB(const MatrixTuple& X, const BallOptions& opt = {});
BallVerdict in_fD(const MatrixTuple& X, const BallOptions& opt = {});
BallVerdict in_wmax_ball(const MatrixTuple& X, const BallOptions& opt = {});
BallVerdict in_wmin_ball(const MatrixTuple& X, const BallOptions& opt = {});
BallVerdict in_fB_dual(const MatrixTuple& X, const BallOptions& opt = {});
BallVerdict in_lehner_ball(const MatrixTuple& X, const BallOptions& opt = {});
BallVerdict in_W_s_half(const MatrixTuple& X, const BallOptions& opt = {});
BallVerdict ball_member(Ball b, const MatrixTuple& X, const BallOptions& opt = {});

// max over unit c of lambda_max(sum c_i X_i) (grid plus fixed-point ascent) and its maximizer.
std::pair<double, RVec> wmax_gauge(const MatrixTuple& X, const BallOptions& opt = {});

// Hermitian unitaries g_1..g_d with g_i g_j + g_j g_i = 2 delta_ij (size 2^ceil(d/2)).
std::vector<CMat> clifford_generators(int d);

// Random members of wmin, fB, fD or wmax at level n. Gaussian Hermitian tuples are
// scaled to the boundary of the ball and shrunk by a uniform factor; wmin members
// are compressions of diagonal tuples with 2n+2 joint eigenvalues uniform in the
// unit ball.
MatrixTuple sample_ball_member(Ball b, int d, int n, RngStream& rng, const BallOptions& opt = {});

struct AuditCheck {
  std::string name;
  int tested = 0, passed = 0, unknown = 0, violations = 0;
  std::optional<MatrixTuple> witness;  // first violating point
};

struct StrictnessWitness {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool holds = false;
  std::string note;
};

struct AuditReport {
  int d = 0, n = 0, samples = 0;
  std::uint64_t seed = 0;
  std::vector<AuditCheck> checks;
  std::vector<StrictnessWitness> witnesses;
  int level1_points = 0, level1_disagreements = 0;
  bool ok() const;  // no order violations, no level-1 disagreements
};

struct AuditOptions {
  int d = 2, n = 2, samples = 500;
  std::uint64_t seed = 0;
  bool witnesses = true;
  bool level1 = true;
  int level1_points = 1000;
  BallOptions ball;
};

AuditReport audit_chain(const AuditOptions& opt);
nlohmann::json to_json(const AuditReport& r);

}  // namespace matrange
