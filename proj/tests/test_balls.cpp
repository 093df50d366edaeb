#include <cmath>

#include "doctest.h"
#include "matrange/balls.hpp"
#include "matrange/error.hpp"
#include "matrange/fock.hpp"
#include "matrange/free_norms.hpp"
#include "test_util.hpp"

using namespace matrange;
using namespace testutil;

namespace {

MatrixTuple pauli_pair(double c = 1.0) { return make_tuple({c * pauli_x(), c * pauli_z()}, true); }

MatrixTuple b_tuple() {
  const auto a = counterexample_pair(7.0);
  return scaled(a, 2.0 / lehner_semicircular_norm(a));
}

void check_decomposition(const BallVerdict& v, const MatrixTuple& X) {
  REQUIRE(v.certificate.kind == "decomposition");
  const auto& at = v.certificate.atoms;
  REQUIRE(static_cast<std::size_t>(at.rows()) == v.certificate.effects.size());
  CMat sum = CMat::Zero(X.n(), X.n());
  for (int k = 0; k < at.rows(); ++k) {
    CHECK(at.row(k).norm() <= 1 + 1e-9);
    CHECK(lambda_min(hermitian_part(v.certificate.effects[static_cast<std::size_t>(k)])) > -1e-6);
    sum += v.certificate.effects[static_cast<std::size_t>(k)];
  }
  CHECK((sum - CMat::Identity(X.n(), X.n())).cwiseAbs().maxCoeff() < 1e-6);
  for (int i = 0; i < X.d(); ++i) {
    CMat Xi = CMat::Zero(X.n(), X.n());
    for (int k = 0; k < at.rows(); ++k) Xi += at(k, i) * v.certificate.effects[static_cast<std::size_t>(k)];
    CHECK((Xi - X[i]).cwiseAbs().maxCoeff() < 1e-5);
  }
}

void check_pencil(const BallVerdict& v, const MatrixTuple& X) {
  REQUIRE(v.certificate.pencil.has_value());
  const auto& p = *v.certificate.pencil;
  CHECK(lambda_min(hermitian_part(evaluate(p, X))) < 0);
  for (int k = 0; k < 360; ++k) {
    RVec c(2);
    c << std::cos(k * M_PI / 180), std::sin(k * M_PI / 180);
    CHECK(lambda_min(hermitian_part(evaluate(p, scalar_point(c)))) > -1e-9);
  }
}

}  // namespace

TEST_CASE("clifford generators") {
  for (int d = 1; d <= 5; ++d) {
    const auto g = clifford_generators(d);
    REQUIRE(static_cast<int>(g.size()) == d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const CMat ac = g[i] * g[j] + g[j] * g[i];
        const CMat want = (i == j ? 2.0 : 0.0) * CMat::Identity(g[i].rows(), g[i].rows());
        CHECK((ac - want).norm() < 1e-12);
      }
  }
}

TEST_CASE("fB and fD") {
  CHECK(in_fB(zero_tuple(2, 3)).answer == BallAnswer::in);
  CMat e1 = CMat::Zero(2, 2), e2 = CMat::Zero(2, 2);
  e1(0, 0) = 1;
  e2(1, 1) = 1;
  CHECK(in_fB(make_tuple({e1, e2}, true)).answer == BallAnswer::in);
  const auto b = in_fB(b_tuple());
  CHECK(b.answer == BallAnswer::out);
  CHECK(b.certificate.value > 1);

  RVec x(3);
  x << 0.3, -0.5, 0.6;
  CHECK(in_fD(scalar_point(x)).certificate.value == doctest::Approx(x.squaredNorm()));
  CHECK(in_fB(scalar_point(x)).certificate.value == doctest::Approx(x.squaredNorm()));

  const auto X = pauli_pair(1 / std::sqrt(2.0));
  const CMat brute = (kron(pauli_x(), pauli_x()) + kron(pauli_z(), pauli_z())) / 2.0;
  const auto fd = in_fD(X);
  CHECK(fd.certificate.value == doctest::Approx(lambda_max(brute)).epsilon(1e-12));
  CHECK(fd.answer == BallAnswer::in);
  CHECK(in_fD(pauli_pair(0.75)).answer == BallAnswer::out);
}

TEST_CASE("wmax") {
  CHECK(in_wmax_ball(pauli_pair()).answer == BallAnswer::in);
  CHECK(in_wmax_ball(pauli_pair()).certificate.value == doctest::Approx(1.0).epsilon(1e-12));
  const auto v = in_wmax_ball(make_tuple({1.2 * pauli_x(), CMat::Zero(2, 2)}, true));
  CHECK(v.answer == BallAnswer::out);
  CHECK(std::abs(v.certificate.direction(0)) == doctest::Approx(1.0).epsilon(1e-9));
  std::mt19937_64 g(1);
  for (int k = 0; k < 50; ++k) {
    const RVec x = random_vec(g, 1 + k % 4) * 0.8;
    CHECK((in_wmax_ball(scalar_point(x)).answer == BallAnswer::in) == (x.norm() <= 1));
  }
}

TEST_CASE("wmin") {
  const auto D = make_tuple({CMat(RVec::Map(std::vector<double>{0.6, -0.2, 0.0}.data(), 3).cast<cplx>().asDiagonal()),
                             CMat(RVec::Map(std::vector<double>{0.7, 0.9, -1.0}.data(), 3).cast<cplx>().asDiagonal())},
                            true);
  const auto vd = in_wmin_ball(D);
  CHECK(vd.answer == BallAnswer::in);
  check_decomposition(vd, D);

  const auto full = in_wmin_ball(pauli_pair());
  CHECK(full.answer == BallAnswer::out);
  check_pencil(full, pauli_pair());

  const auto half = in_wmin_ball(pauli_pair(0.5));
  CHECK(half.answer == BallAnswer::in);
  check_decomposition(half, pauli_pair(0.5));

  // Outside: the Clifford pencil has lambda_min 1 - sqrt 2 there.
  const auto root = in_wmin_ball(pauli_pair(1 / std::sqrt(2.0)));
  CHECK(root.answer == BallAnswer::out);
  check_pencil(root, pauli_pair(1 / std::sqrt(2.0)));

  // A non-Clifford point just outside is caught by the polytope pencil.
  std::mt19937_64 g(2);
  int decided = 0;
  for (int k = 0; k < 6; ++k) {
    const auto X = random_sa_tuple(g, 2, 2, 0.6);
    const auto v = in_wmin_ball(X);
    if (v.answer == BallAnswer::in) check_decomposition(v, X);
    if (v.answer == BallAnswer::out && v.certificate.pencil) check_pencil(v, X);
    decided += v.answer != BallAnswer::unknown;
  }
  CHECK(decided >= 4);

  const RVec x = RVec::Constant(1, -0.4);
  const auto one = in_wmin_ball(scalar_point(x));
  CHECK(one.answer == BallAnswer::in);
  check_decomposition(one, scalar_point(x));
}

TEST_CASE("lehner ball") {
  std::mt19937_64 g(3);
  for (int k = 0; k < 20; ++k) {
    RVec x = random_vec(g, 2);
    x *= (0.5 + 0.05 * k) / x.norm();
    CHECK((in_lehner_ball(scalar_point(x)).answer == BallAnswer::in) == (x.norm() <= 1));
  }
  for (int k = 0; k < 5; ++k) {
    auto X = random_sa_tuple(g, 2, 3);
    X = scaled(X, 1 / std::sqrt(lambda_max(sum_squares(X))));
    CHECK(in_lehner_ball(X).answer == BallAnswer::in);
  }
  CHECK(in_lehner_ball(b_tuple()).answer == BallAnswer::in);
}

TEST_CASE("W(s/2) sandwich") {
  std::mt19937_64 g(4);
  auto X = random_sa_tuple(g, 2, 2);
  X = scaled(X, 0.9 / std::sqrt(lambda_max(sum_squares(X))));
  CHECK(in_W_s_half(X).answer == BallAnswer::in);
  RVec x(2);
  x << 0.9, 0.8;
  const auto v = in_W_s_half(scalar_point(x));
  CHECK(v.answer == BallAnswer::out);
  REQUIRE(v.certificate.dual_point.has_value());
  CHECK(v.certificate.dual_point->mats[0](0, 0).real() == doctest::Approx(x(0) / x.norm()));

  // Compressions of s/2 lie in W(s/2): never "out".
  const auto s3 = scaled(semicircular_truncation(2, 3), 0.5);
  CHECK(in_W_s_half(s3).answer != BallAnswer::out);
}

TEST_CASE("fB dual") {
  CHECK(in_fB_dual(pauli_pair(1 / std::sqrt(2.0))).answer == BallAnswer::in);
  const auto v = in_fB_dual(pauli_pair());
  CHECK(v.answer == BallAnswer::out);
  REQUIRE(v.certificate.dual_point.has_value());
  const auto& Y = *v.certificate.dual_point;
  CHECK(lambda_max(sum_squares(Y)) <= 1 + 1e-9);
  CMat M = kron(pauli_x(), Y[0]) + kron(pauli_z(), Y[1]);
  CHECK(lambda_max(hermitian_part(M)) > 1);
}

TEST_CASE("verdict symmetries") {
  std::mt19937_64 g(5);
  for (int k = 0; k < 4; ++k) {
    const auto X = random_sa_tuple(g, 2, 2, 0.35 + 0.1 * k);
    Eigen::HouseholderQR<CMat> qr(random_complex(g, 2, 2));
    const CMat U = qr.householderQ();
    MatrixTuple conj = X;
    for (auto& M : conj.mats) M = (U * M * U.adjoint()).eval();
    const auto neg = scaled(X, -1.0);
    const auto swp = make_tuple({X[1], X[0]}, true);
    for (Ball b : {Ball::fB, Ball::fD, Ball::wmax, Ball::lehner, Ball::wmin}) {
      const auto a = ball_member(b, X).answer;
      CHECK(ball_member(b, conj).answer == a);
      CHECK(ball_member(b, neg).answer == a);
      CHECK(ball_member(b, swp).answer == a);
    }
  }
}

TEST_CASE("matrix convexity of the LMI balls") {
  std::mt19937_64 g(6);
  for (Ball b : {Ball::fB, Ball::fD, Ball::lehner}) {
    RngStream rng(7, static_cast<std::uint64_t>(b));
    const auto X = sample_ball_member(b == Ball::lehner ? Ball::fB : b, 2, 2, rng);
    const auto Y = sample_ball_member(b == Ball::lehner ? Ball::fB : b, 2, 2, rng);
    REQUIRE(ball_member(b, X).answer == BallAnswer::in);
    REQUIRE(ball_member(b, Y).answer == BallAnswer::in);
    CHECK(ball_member(b, scaled(add(X, Y), 0.5)).answer == BallAnswer::in);
    Eigen::HouseholderQR<CMat> qr(random_complex(g, 4, 3));
    const CMat V = qr.householderQ() * CMat::Identity(4, 3);
    CHECK(ball_member(b, compress(direct_sum(X, Y), V)).answer == BallAnswer::in);
  }
}

TEST_CASE("samplers land in their balls") {
  for (Ball b : {Ball::wmin, Ball::fB, Ball::fD, Ball::wmax}) {
    RngStream rng(11, static_cast<std::uint64_t>(b));
    for (int k = 0; k < 5; ++k) {
      const auto X = sample_ball_member(b, 2, 2, rng);
      CHECK(ball_member(b, X).answer != BallAnswer::out);
    }
  }
  RngStream rng(1, 1);
  CHECK_THROWS_AS(sample_ball_member(Ball::lehner, 2, 2, rng), Error);
}

TEST_CASE("small audit") {
  AuditOptions o;
  o.samples = 12;
  o.level1_points = 64;
  o.seed = 3;
  const auto r = audit_chain(o);
  CHECK(r.ok());
  for (const auto& c : r.checks) CHECK(c.violations == 0);
  CHECK(r.level1_points == 64);
  REQUIRE(r.witnesses.size() == 3);
  CHECK(r.witnesses[0].holds);
  CHECK(r.witnesses[1].holds);
  const auto j = to_json(r);
  CHECK(j["ok"].get<bool>());

  AuditOptions o3;
  o3.d = 3;
  o3.n = 1;
  o3.samples = 4;
  o3.witnesses = false;
  o3.level1_points = 125;
  const auto r3 = audit_chain(o3);
  CHECK(r3.level1_disagreements == 0);
  CHECK(r3.ok());
  o3.d = 5;
  CHECK_THROWS_AS(audit_chain(o3), Error);
}
