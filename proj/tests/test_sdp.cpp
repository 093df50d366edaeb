#include <cmath>
#include <numbers>

#include "doctest.h"
#include "matrange/error.hpp"
#include "matrange/sdp.hpp"
#include "test_util.hpp"

using namespace matrange;
using namespace matrange::sdp;
using namespace testutil;

namespace {

// min t s.t. tI - A >= 0
SdpProblem lambda_max_problem(const CMat& A) {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = RVec::Ones(1);
  LmiConstraint lmi;
  lmi.constant = -A;
  SparseHermitian I;
  for (int i = 0; i < A.rows(); ++i) I.add_diagonal(i, 1.0);
  lmi.coefficients = {I};
  p.lmis = {lmi};
  return p;
}

// [[1, y], [y, 1]] >= 0 style 2x2 with symbolic off-diagonal
LmiConstraint two_by_two(double a, double c, int num_vars, int var) {
  LmiConstraint lmi;
  lmi.constant = CMat::Zero(2, 2);
  lmi.constant(0, 0) = a;
  lmi.constant(1, 1) = c;
  lmi.coefficients.resize(static_cast<std::size_t>(num_vars));
  lmi.coefficients[static_cast<std::size_t>(var)].add(0, 1, 1.0);
  return lmi;
}

// Fixed-Z Schur LMI: [[L I - Z, X_1 .. X_d], [X_i, Z ...]] >= 0, feasibility in no variables.
bool diag_bound_feasible(const MatrixTuple& X, const CMat& Z, double L) {
  const int n = X.n(), d = X.d();
  CMat F = CMat::Zero(n * (d + 1), n * (d + 1));
  F.topLeftCorner(n, n) = L * CMat::Identity(n, n) - Z;
  for (int i = 0; i < d; ++i) {
    F.block(0, n * (i + 1), n, n) = X[i];
    F.block(n * (i + 1), 0, n, n) = X[i].adjoint();
    F.block(n * (i + 1), n * (i + 1), n, n) = Z;
  }
  SdpProblem p;
  p.num_vars = 0;
  p.objective = RVec(0);
  LmiConstraint lmi;
  lmi.constant = F;
  p.lmis = {lmi};
  SolverOptions opt;
  opt.tol = 1e-10;
  const auto s = find_feasible_point(p, opt);
  return s.status == Status::feasible_point;
}

}  // namespace

TEST_CASE("lambda max of a diagonal") {
  CMat A = CMat::Zero(3, 3);
  A.diagonal() << 1, 5, 2;
  const auto s = solve_sdp(lambda_max_problem(A), 1e-8);
  CHECK(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("2x2 determinant bound") {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = -RVec::Ones(1);
  p.lmis = {two_by_two(1, 1, 1, 0)};
  const auto s = solve_sdp(p, 1e-9);
  CHECK(s.status == Status::optimal);
  CHECK(s.y(0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("square sum of the counterexample pair") {
  const auto a = counterexample_pair();
  const CMat S = a[0] * a[0] + a[1] * a[1];
  const auto s = solve_sdp(lambda_max_problem(S), 1e-9);
  CHECK(s.status == Status::optimal);
  CHECK(std::abs(s.objective - 16.0) < 1e-6);
}

TEST_CASE("bisection") {
  CHECK(std::abs(bisect_feasibility([](double l) { return l >= std::numbers::pi; }, 0, 10, 1e-8) -
                 std::numbers::pi) <= 1e-8);
  CHECK_THROWS_AS(bisect_feasibility([](double l) { return l >= 1; }, 2, 10, 1e-8), Error);
  CHECK_THROWS_AS(bisect_feasibility([](double l) { return l >= 11; }, 2, 10, 1e-8), Error);

  std::mt19937_64 g(17);
  const CMat A = random_hermitian(g, 6);
  auto oracle = [&](double l) {
    SdpProblem p;
    p.num_vars = 0;
    p.objective = RVec(0);
    LmiConstraint lmi;
    lmi.constant = l * CMat::Identity(6, 6) - A;
    p.lmis = {lmi};
    SolverOptions opt;
    opt.tol = 1e-10;
    return find_feasible_point(p, opt).status == Status::feasible_point;
  };
  const double lm = bisect_feasibility(oracle, -20, 20, 1e-8);
  CHECK(std::abs(lm - lambda_max(A)) < 1e-7);
}

TEST_CASE("diagonal bound threshold of the counterexample") {
  const auto a = counterexample_pair();
  CMat Z = CMat::Zero(2, 2);
  Z.diagonal() << 3, 7;
  const double expect = std::max(3 + 2 * (7.0 / 3 + 1.0 / 7), 7 + 2 * (1.0 / 3 + 1.0 / 49));
  const double v = bisect_feasibility([&](double L) { return diag_bound_feasible(a, Z, L); }, 5, 10, 1e-8);
  CHECK(std::abs(v - expect) < 1e-6);
  CHECK(std::abs(expect - 7.952380952) < 1e-8);
}

TEST_CASE("infeasible LMI yields a Farkas certificate") {
  // [[y, 1], [1, -y]] has determinant -y^2 - 1 < 0.
  SdpProblem p;
  p.num_vars = 1;
  p.objective = RVec::Zero(1);
  LmiConstraint lmi;
  lmi.constant = CMat::Zero(2, 2);
  lmi.constant(0, 1) = lmi.constant(1, 0) = 1.0;
  SparseHermitian F1;
  F1.add_diagonal(0, 1.0);
  F1.add_diagonal(1, -1.0);
  lmi.coefficients = {F1};
  p.lmis = {lmi};
  const auto s = solve_sdp(p, 1e-8);
  REQUIRE(s.status == Status::infeasible);
  const CMat& X = s.dual[0];
  CHECK(lambda_min(hermitian_part(X)) > -1e-7);
  CHECK(std::abs((F1.dense(2) * X).trace().real()) < 1e-6);
  CHECK((lmi.constant * X).trace().real() < -1e-6);
}

TEST_CASE("equality constraints and bounds") {
  SdpProblem p;
  p.num_vars = 2;
  p.objective = RVec::Ones(2);
  LmiConstraint lmi;
  lmi.constant = CMat::Zero(2, 2);
  SparseHermitian a, b;
  a.add_diagonal(0, 1.0);
  b.add_diagonal(1, 1.0);
  lmi.coefficients = {a, b};
  p.lmis = {lmi};
  p.eq_matrix = RMat(1, 2);
  p.eq_matrix << 1, -1;
  p.eq_rhs = RVec::Ones(1);
  const auto s = solve_sdp(p, 1e-9);
  CHECK(s.status == Status::optimal);
  CHECK(s.y(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(s.y(1)) < 1e-6);

  SdpProblem q;
  q.num_vars = 1;
  q.objective = -RVec::Ones(1);
  q.lmis = {two_by_two(1, 4, 1, 0)};
  q.upper = RVec::Ones(1);
  q.lower = RVec::Constant(1, -std::numeric_limits<double>::infinity());
  const auto t = solve_sdp(q, 1e-9);
  CHECK(t.status == Status::optimal);
  CHECK(t.y(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("complex LMI equals its real embedding") {
  std::mt19937_64 g(23);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 3, m = 3;
    SdpProblem pc, pr;
    pc.num_vars = pr.num_vars = m;
    pc.objective = pr.objective = random_vec(g, m);
    LmiConstraint lc, lr;
    lc.constant = CMat::Identity(n, n) * 4.0;
    std::vector<CMat> F;
    for (int k = 0; k < m; ++k) F.push_back(random_hermitian(g, n));
    for (int k = 0; k < m; ++k) lc.coefficients.push_back(SparseHermitian::from_dense(F[static_cast<std::size_t>(k)]));
    auto emb = [&](const CMat& M) {
      CMat E = CMat::Zero(2 * n, 2 * n);
      E.topLeftCorner(n, n) = M.real().cast<cplx>();
      E.bottomRightCorner(n, n) = M.real().cast<cplx>();
      E.bottomLeftCorner(n, n) = M.imag().cast<cplx>();
      E.topRightCorner(n, n) = -M.imag().cast<cplx>();
      return E;
    };
    lr.constant = emb(lc.constant);
    for (int k = 0; k < m; ++k) lr.coefficients.push_back(SparseHermitian::from_dense(emb(F[static_cast<std::size_t>(k)])));
    // Box keeps both problems bounded.
    pc.lower = pr.lower = RVec::Constant(m, -5.0);
    pc.upper = pr.upper = RVec::Constant(m, 5.0);
    pc.lmis = {lc};
    pr.lmis = {lr};
    const auto sc = solve_sdp(pc, 1e-9), sr = solve_sdp(pr, 1e-9);
    REQUIRE(sc.status == Status::optimal);
    REQUIRE(sr.status == Status::optimal);
    CHECK(std::abs(sc.objective - sr.objective) < 1e-7 * (1 + std::abs(sc.objective)));
    CHECK(sc.dual_objective <= sc.objective + 1e-7 * (1 + std::abs(sc.objective)));
  }
}

TEST_CASE("weak duality and verdict stability on a random corpus") {
  std::mt19937_64 g(31);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 2 + rep % 3, m = 1 + rep % 4;
    SdpProblem p;
    p.num_vars = m;
    p.objective = random_vec(g, m);
    LmiConstraint lmi;
    // Feasible or not depending on the shift.
    lmi.constant = random_hermitian(g, n) + (rep % 2 == 0 ? 3.0 : -30.0) * CMat::Identity(n, n);
    for (int k = 0; k < m; ++k) {
      CMat F = random_hermitian(g, n);
      if (rep % 2 == 1) F = F * F;  // PSD coefficients keep the -30 shift infeasible on the box
      lmi.coefficients.push_back(SparseHermitian::from_dense(F));
    }
    p.lmis = {lmi};
    p.lower = RVec::Constant(m, -1.0);
    p.upper = RVec::Constant(m, 1.0);
    const auto a = solve_sdp(p, 1e-7), b = solve_sdp(p, 1e-8);
    CHECK(a.status == b.status);
    if (a.status == Status::optimal) {
      CHECK(a.dual_objective <= a.objective + 1e-7 * (1 + std::abs(a.objective)));
      CHECK(a.max_violation < 1e-6);
    }
  }
}

TEST_CASE("alternating projections find a feasible point") {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = RVec::Zero(1);
  p.lmis = {two_by_two(1, 1, 1, 0)};
  p.lmis[0].constant(0, 1) = p.lmis[0].constant(1, 0) = 3.0;  // infeasible at y = 0
  const auto r = alternating_projections(p);
  CHECK(r.converged);
  CHECK(lmi_min_eig(p.lmis[0], r.y) >= -1e-7);
}

TEST_CASE("dimension errors") {
  SdpProblem p;
  p.num_vars = 2;
  p.objective = RVec::Ones(1);
  CHECK_THROWS_AS(solve_sdp(p, 1e-7), Error);
  p.objective = RVec::Ones(2);
  LmiConstraint lmi;
  lmi.constant = CMat::Identity(2, 2);
  lmi.coefficients.resize(1);
  p.lmis = {lmi};
  CHECK_THROWS_AS(solve_sdp(p, 1e-7), Error);
  CHECK_THROWS_AS(solve_sdp(lambda_max_problem(CMat::Identity(2, 2)), 1e-2), Error);
}
