#include <cmath>

#include "doctest.h"
#include "matrange/error.hpp"
#include "matrange/fock.hpp"
#include "matrange/free_norms.hpp"
#include "test_util.hpp"

using namespace matrange;
using namespace testutil;

namespace {

// Minimum of lambda_max(Z + a1 Z^-1 a1 + a2 Z^-1 a2) over Z > 0, from an
// independent Nelder-Mead search over Cholesky factors (frozen).
constexpr double kCounterexampleLehner = 7.7615553151;

CMat random_unitary(std::mt19937_64& g, int n) {
  Eigen::HouseholderQR<CMat> qr(random_complex(g, n, n));
  return qr.householderQ();
}

}  // namespace

TEST_CASE("scalar semicircular law") {
  CHECK(lehner_semicircular_norm(scalar_point(RVec::Unit(3, 0))) == doctest::Approx(2.0).epsilon(1e-7));
  RVec x(2);
  x << 3, 4;
  CHECK(std::abs(lehner_semicircular_norm(scalar_point(x)) - 10.0) < 1e-6);
  CHECK(lehner_scalar_semicircular(RVec::Zero(3)) == 0.0);
  CHECK(lehner_scalar_semicircular(RVec::Ones(4)) == 4.0);
  CHECK(lehner_semicircular_norm(zero_tuple(2, 3)) == 0.0);

  std::mt19937_64 g(101);
  int bad = 0;
  for (int k = 0; k < 100; ++k) {
    const RVec v = random_vec(g, 1 + k % 5);
    bad += std::abs(lehner_semicircular_norm(scalar_point(v)) - lehner_scalar_semicircular(v)) > 1e-6;
  }
  CHECK(bad == 0);
}

TEST_CASE("counterexample pair") {
  const auto a = counterexample_pair();
  RVec z(2);
  z << 3, 7;
  CHECK(std::abs(diag_upper_bound(a, z) - 7.952380952380952) < 1e-9);
  const auto r = lehner_semicircular(a);
  CHECK(r.value > 6.04);
  CHECK(r.value < 7.9524);
  CHECK(std::abs(r.value - kCounterexampleLehner) < 1e-6);
  CHECK(r.certified_upper >= r.value - 1e-7);
  CHECK(r.certified_upper < r.value + 1e-6);
  CHECK(r.dual_lower <= r.value + 1e-6);
  CHECK(r.rho == doctest::Approx(4.0).epsilon(1e-12));
  const auto [v, b] = semicircular_rownorm_bound(a);
  CHECK(v < 8 - 1e-3);
  CHECK(b == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("diagonal bound dominates the norm") {
  std::mt19937_64 g(7);
  RVec x(3);
  x << 1, -2, 2;
  CHECK(std::abs(diag_upper_bound(scalar_point(x), RVec::Constant(1, 3.0)) - 6.0) < 1e-12);
  int bad = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 2;
    const auto X = random_sa_tuple(g, 2, n);
    RVec z(n);
    for (int i = 0; i < n; ++i) z(i) = 0.2 + std::abs(random_vec(g, 1)(0));
    bad += diag_upper_bound(X, z) < lehner_semicircular_norm(X) - 1e-7;
  }
  CHECK(bad == 0);
  CHECK_THROWS_AS(diag_upper_bound(scalar_point(x), RVec::Constant(1, -1.0)), Error);
}

TEST_CASE("row norm sandwich") {
  const auto e = semicircular_rownorm_bound(scalar_point(RVec::Unit(2, 0)));
  CHECK(e.first == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(e.second == doctest::Approx(2.0));
  std::mt19937_64 g(8);
  for (int k = 0; k < 20; ++k) {
    const auto X = random_sa_tuple(g, 2, 3);
    const auto [v, b] = semicircular_rownorm_bound(X);
    CHECK(v <= b + 1e-7);
    CHECK(v >= 0.5 * b - 1e-7);
  }
}

TEST_CASE("equivariance and symmetry") {
  std::mt19937_64 g(9);
  for (int k = 0; k < 5; ++k) {
    const auto X = random_sa_tuple(g, 2, 2);
    const double v = lehner_semicircular_norm(X);
    CHECK(std::abs(lehner_semicircular_norm(scaled(X, -2.5)) - 2.5 * v) < 1e-6);
    const CMat U = random_unitary(g, 2);
    CHECK(std::abs(lehner_semicircular_norm(compress(X, U)) - v) < 1e-6);
    MatrixTuple Y = X;
    Y.mats[0] = -Y.mats[0];
    CHECK(std::abs(lehner_semicircular_norm(Y) - v) < 1e-6);
  }
}

TEST_CASE("epsilon sensitivity and real restriction") {
  const auto a = counterexample_pair();
  LehnerOptions o;
  const double v1 = lehner_semicircular(a, o).value;
  o.eps_factor = 1e-8;
  const double v2 = lehner_semicircular(a, o).value;
  o.real_z_when_real = false;
  const double v3 = lehner_semicircular(a, o).value;
  CHECK(std::abs(v1 - v2) < 1e-6);
  CHECK(std::abs(v2 - v3) < 1e-6);
}

TEST_CASE("fock truncations approach the oracle from below") {
  std::mt19937_64 g(10);
  for (int k = 0; k < 4; ++k) {
    const auto X = random_sa_tuple(g, 2, 1 + k % 3, 0.4);
    const double v = lehner_semicircular_norm(X);
    const double f10 = fock_pencil_norm(X, 10), f12 = fock_pencil_norm(X, 12);
    CHECK(f10 <= v + 1e-7);
    CHECK(f12 <= v + 1e-7);
    CHECK(f12 >= f10 - 1e-9);
    CHECK(v - f12 < 0.1);
  }
  const auto Y = random_sa_tuple(g, 3, 2, 0.4);
  CHECK(fock_pencil_norm(Y, 10) <= lehner_semicircular_norm(Y) + 1e-7);
}

TEST_CASE("haar scalar formula") {
  CHECK(std::abs(lehner_scalar_haar(RVec::Constant(1, -2.5)) - 2.5) < 1e-12);
  CHECK(std::abs(lehner_scalar_haar(RVec::Ones(2)) - std::sqrt(3.0)) < 1e-8);
  for (int d = 1; d <= 6; ++d) {
    CHECK(std::abs(lehner_scalar_haar(RVec::Ones(d)) - std::sqrt(2.0 * d - 1)) < 1e-8);
    CHECK(std::abs(lehner_scalar_haar(3.0 * RVec::Unit(d, 0)) - 3.0) < 1e-12);
  }
  CHECK(lehner_scalar_haar(RVec::Zero(3)) == 0.0);
  std::mt19937_64 g(12);
  for (int k = 0; k < 200; ++k) {
    const RVec x = random_vec(g, 1 + k % 5);
    CHECK(lehner_scalar_haar(x) >= x.cwiseAbs().maxCoeff() - 1e-12);
    CHECK(lehner_scalar_haar(x) <= x.cwiseAbs().sum() + 1e-12);
  }
}

TEST_CASE("shifted shift norm") {
  for (int d = 1; d <= 9; ++d) {
    const auto m = shifted_shift_norm(d);
    CHECK(std::abs(m.value - std::pow(1 + std::sqrt(d), 2)) < 1e-9);
    CHECK(std::abs(m.argmin - (1 + std::sqrt(d))) < 1e-6);
  }
  CHECK(std::abs(shifted_shift_norm(4).value - 9.0) < 1e-9);
}

TEST_CASE("preconditions") {
  std::mt19937_64 g(13);
  MatrixTuple X{{random_complex(g, 2, 2)}, false};
  CHECK_THROWS_AS(lehner_semicircular_norm(X), Error);
}
