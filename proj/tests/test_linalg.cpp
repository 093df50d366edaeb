#include <cmath>
#include <numbers>

#include "doctest.h"
#include "matrange/error.hpp"
#include "matrange/lanczos.hpp"
#include "matrange/linalg.hpp"
#include "matrange/sphere.hpp"
#include "matrange/tuple_io.hpp"
#include "test_util.hpp"

using namespace matrange;
using namespace testutil;

TEST_CASE("row norm examples") {
  CHECK(row_norm(make_tuple({CMat::Identity(2, 2)}, true)) == doctest::Approx(1.0));
  CMat a(2, 2), b(2, 2);
  a << 3, 0, 0, 0;
  b << 0, 0, 0, 4;
  CHECK(row_norm(make_tuple({a, b}, true)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(row_norm(counterexample_pair()) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("row norm brackets") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 40; ++rep) {
    const auto X = random_sa_tuple(g, 3, 4);
    double sum = 0.0, mx = 0.0;
    for (const auto& M : X.mats) {
      sum += op_norm(M);
      mx = std::max(mx, op_norm(M));
    }
    const double r = row_norm(X);
    CHECK(r <= sum + 1e-12);
    CHECK(r >= mx - 1e-12);
  }
}

TEST_CASE("tuple distance") {
  std::mt19937_64 g(3);
  const auto X = random_sa_tuple(g, 2, 3);
  CHECK(tuple_distance(X, X) == doctest::Approx(0.0));
  CHECK(tuple_distance(zero_tuple(1, 3), make_tuple({CMat::Identity(3, 3)}, true)) == doctest::Approx(1.0));
  for (int rep = 0; rep < 20; ++rep) {
    const auto A = random_sa_tuple(g, 2, 2), B = random_sa_tuple(g, 2, 2);
    CMat S = CMat::Zero(2, 2);
    for (int i = 0; i < 2; ++i) S += (A[i] - B[i]) * (A[i] - B[i]);
    CHECK(tuple_distance(A, B) == doctest::Approx(std::sqrt(lmax2(S))).epsilon(1e-12));
    CHECK(tuple_distance(A, B) == doctest::Approx(tuple_distance(B, A)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(tuple_distance(random_sa_tuple(g, 2, 2), random_sa_tuple(g, 3, 2)), Error);
}

namespace {
PointCloud circle(int K, double radius) {
  RMat rows = radius * sphere_directions(2, K);
  return cloud_from_rows(rows);
}
}  // namespace

TEST_CASE("hausdorff cloud") {
  const auto E = circle(360, 1.0), F = circle(360, 2.0);
  CHECK(hausdorff_cloud(E, E) == 0.0);
  CHECK(std::abs(hausdorff_cloud(E, F) - 1.0) < 2e-4);
  PointCloud a, b;
  std::mt19937_64 g(5);
  a.points = {random_sa_tuple(g, 2, 3)};
  b.points = {random_sa_tuple(g, 2, 3)};
  CHECK(hausdorff_cloud(a, b) == doctest::Approx(tuple_distance(a.points[0], b.points[0])).epsilon(1e-12));
  PointCloud empty;
  CHECK_THROWS_AS(hausdorff_cloud(empty, a), Error);
}

TEST_CASE("hausdorff triangle inequality") {
  std::mt19937_64 g(8);
  for (int rep = 0; rep < 20; ++rep) {
    PointCloud c[3];
    for (auto& cl : c) {
      const int k = 1 + static_cast<int>(g() % 6);
      for (int i = 0; i < k; ++i) cl.points.push_back(random_sa_tuple(g, 2, 2));
    }
    CHECK(hausdorff_cloud(c[0], c[2]) <= hausdorff_cloud(c[0], c[1]) + hausdorff_cloud(c[1], c[2]) + 1e-12);
    c[0].metric = c[1].metric = c[2].metric = Metric::hilbert_schmidt;
    CHECK(hausdorff_cloud(c[0], c[2]) <= hausdorff_cloud(c[0], c[1]) + hausdorff_cloud(c[1], c[2]) + 1e-12);
  }
}

TEST_CASE("hausdorff zero iff equal sets") {
  std::mt19937_64 g(9);
  PointCloud a;
  for (int i = 0; i < 5; ++i) a.points.push_back(random_sa_tuple(g, 2, 1));
  PointCloud b = a;
  std::swap(b.points[0], b.points[3]);
  b.points.push_back(a.points[1]);
  CHECK(hausdorff_cloud(a, b) < 1e-12);
  b.points.push_back(random_sa_tuple(g, 2, 1));
  CHECK(hausdorff_cloud(a, b) > 1e-6);
}

TEST_CASE("kron") {
  CHECK(kron(CMat::Identity(2, 2), CMat::Identity(3, 3)).isApprox(CMat::Identity(6, 6)));
  CMat a = CMat::Zero(2, 2), b = CMat::Zero(2, 2);
  a.diagonal() << 1, 2;
  b.diagonal() << 3, 4;
  CMat expect = CMat::Zero(4, 4);
  expect.diagonal() << 3, 4, 6, 8;
  CHECK((kron(a, b) - expect).norm() == 0.0);
  std::mt19937_64 g(1);
  const CMat A = random_complex(g, 2, 2), B = random_complex(g, 2, 2), C = random_complex(g, 2, 2),
             D = random_complex(g, 2, 2);
  CHECK((kron(A, B) * kron(C, D) - kron(A * C, B * D)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian spectrum") {
  CMat M = CMat::Zero(3, 3);
  M.diagonal() << 3, 1, 2;
  const auto s = hermitian_spectrum(M);
  CHECK(s == std::vector<double>{1, 2, 3});
  const auto p = hermitian_spectrum(pauli_x());
  CHECK(p[0] == doctest::Approx(-1.0));
  CHECK(p[1] == doctest::Approx(1.0));
  std::mt19937_64 g(2);
  const CMat H = random_hermitian(g, 8);
  const auto ev = hermitian_spectrum(H);
  double tr = 0.0;
  for (double e : ev) tr += e;
  CHECK(std::abs(tr - H.trace().real()) < 1e-10);
  const auto shifted = hermitian_spectrum(H + 2.5 * CMat::Identity(8, 8));
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(shifted[i] - ev[i] - 2.5) < 1e-10);
  CHECK_THROWS_AS(hermitian_spectrum(random_complex(g, 3, 3)), Error);
}

TEST_CASE("realify") {
  const auto r = realify(make_tuple({CMat::Identity(2, 2)}, false));
  CHECK(r.d() == 2);
  CHECK(r.selfadjoint);
  CHECK(r[0].isApprox(CMat::Identity(2, 2)));
  CHECK(r[1].norm() == 0.0);
  const auto ri = realify(make_tuple({cplx(0, 1) * CMat::Identity(2, 2)}, false));
  CHECK(ri[0].norm() == 0.0);
  CHECK((ri[1] - CMat::Identity(2, 2)).norm() < 1e-15);
  std::mt19937_64 g(4);
  const auto X = make_tuple({random_complex(g, 3, 3), random_complex(g, 3, 3)}, false);
  const auto R = realify(X);
  for (int j = 0; j < 2; ++j) CHECK((X[j] - (R[2 * j] + cplx(0, 1) * R[2 * j + 1])).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate shapes rejected") {
  CHECK_THROWS_AS(make_tuple({}, true), Error);
  CHECK_THROWS_AS(make_tuple({CMat(0, 0)}, true), Error);
  CHECK_THROWS_AS(make_tuple({CMat::Identity(2, 2), CMat::Identity(3, 3)}, true), Error);
  std::mt19937_64 g(4);
  CHECK_THROWS_AS(make_tuple({random_complex(g, 2, 2)}, true), Error);
}

TEST_CASE("json round trip") {
  std::mt19937_64 g(6);
  const auto X = random_sa_tuple(g, 3, 2);
  const auto Y = tuple_from_json(tuple_to_json(X));
  CHECK(Y.d() == 3);
  CHECK(Y.selfadjoint);
  for (int i = 0; i < 3; ++i) CHECK((X[i] - Y[i]).norm() == 0.0);
  auto j = tuple_to_json(X);
  j["n"] = 3;
  CHECK_THROWS_AS(tuple_from_json(j), Error);
}

TEST_CASE("lanczos agrees with dense eigensolver") {
  std::mt19937_64 g(12);
  for (int n : {5, 40, 130}) {
    const CMat H = random_hermitian(g, n);
    const auto op = dense_operator(H);
    const auto top = lanczos_largest(op, n, nullptr);
    const auto bot = lanczos_smallest(op, n, nullptr);
    const auto ev = hermitian_spectrum(H);
    CHECK(std::abs(top.value - ev.back()) < 1e-8);
    CHECK(std::abs(bot.value - ev.front()) < 1e-8);
  }
}

TEST_CASE("sphere directions are unit") {
  for (int dim : {1, 2, 3, 5, 8}) {
    const RMat D = sphere_directions(dim, 50, dim == 5 ? 17 : 0);
    for (int k = 0; k < 50; ++k) CHECK(std::abs(D.row(k).norm() - 1.0) < 1e-12);
  }
  const RMat D = sphere_directions(2, 720);
  CHECK(circle_covering_radius(D) == doctest::Approx(2 * std::sin(std::numbers::pi / 720 / 2)).epsilon(1e-9));
  const auto basis = hermitian_basis(3);
  CHECK(basis.size() == 9);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const double ip = (basis[a].adjoint() * basis[b]).trace().real();
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-14);
    }
}
