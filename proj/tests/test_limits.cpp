#include <cmath>

#include "doctest.h"
#include "matrange/error.hpp"
#include "matrange/free_norms.hpp"
#include "matrange/limits.hpp"
#include "matrange/sphere.hpp"
#include "test_util.hpp"

using namespace matrange;
using namespace testutil;

namespace {

CVec cvec(std::initializer_list<cplx> v) {
  CVec w(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (auto z : v) w(i++) = z;
  return w;
}

// Sup of sum a_i x_i over E by sweeping radial boundary points of the orthant.
double radial_sweep_support(const RVec& a, int K) {
  const RMat dirs = orthant_directions(static_cast<int>(a.size()), K);
  double best = 0.0;
  for (int k = 0; k < dirs.rows(); ++k) {
    const RVec u = dirs.row(k).transpose();
    best = std::max(best, a.dot(u) * haar_E_radius(u));
  }
  return best;
}

}  // namespace

TEST_CASE("wigner limit") {
  RVec th(2);
  th << 0.6, 0.8;
  CHECK(wigner_limit_support(2, th) == 2.0);
  CHECK(wigner_limit_support(1, RVec::Ones(1)) == 2.0);
  CHECK(0.5 * wigner_limit_support(2, th) == 1.0);
  CHECK_THROWS_AS(wigner_limit_support(2, RVec::Ones(2)), Error);
  const RMat c = limit_boundary_cloud(LimitKind::wigner, 2, 360);
  CHECK((c.rowwise().norm().array() - 2.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("the set E") {
  CHECK(lehner_scalar_haar(RVec::Unit(3, 0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(haar_E_membership(RVec::Unit(3, 0), 1e-9));
  CHECK_FALSE(haar_E_membership(1.001 * RVec::Unit(3, 0)));
  CHECK(haar_E_membership(RVec::Constant(1, -1.0), 1e-12));
  CHECK_FALSE(haar_E_membership(RVec::Constant(1, 1.01)));
  // Diagonal ray in d = 2: lehner_scalar_haar(1, 1) = sqrt 3.
  const double rho = haar_E_radius(RVec::Ones(2));
  CHECK(rho == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(std::abs(lehner_scalar_haar(RVec::Constant(2, rho)) - 1.0) < 1e-8);

  // Convexity: midpoints of boundary points stay inside.
  std::mt19937_64 g(1);
  int bad = 0;
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 2;
    RVec u = random_vec(g, d).cwiseAbs(), v = random_vec(g, d).cwiseAbs();
    u *= haar_E_radius(u);
    v *= haar_E_radius(v);
    bad += !haar_E_membership(0.5 * (u + v), 1e-9);
    // ||x||_inf <= 1 on E
    bad += u.maxCoeff() > 1 + 1e-9;
  }
  CHECK(bad == 0);
}

TEST_CASE("support of Q") {
  CHECK(haar_Q_support_value(cvec({1, 0})) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(haar_Q_support_value(cvec({cplx(0, 1), 0, 0})) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(haar_Q_support_value(cvec({cplx(0.6, 0.8)})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(haar_Q_support_value(cvec({0, 0})) == 0.0);

  std::mt19937_64 g(2);
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + k % 2;
    CVec w = random_complex(g, d, 1).col(0);
    const auto s = haar_Q_support(w);
    CHECK(haar_Q_support_value(2.0 * w) == doctest::Approx(2 * s.value).epsilon(1e-9));
    CHECK(std::abs(lehner_scalar_haar(s.maximizer) - 1.0) < 1e-7);
    CHECK(w.cwiseAbs().dot(s.maximizer) == doctest::Approx(s.value).epsilon(1e-9));
    if (d == 2) {
      const double sweep = radial_sweep_support(w.cwiseAbs(), 20000);
      CHECK(sweep <= s.value + 1e-9);
      CHECK(sweep >= s.value - 1e-6);
    }
  }
}

TEST_CASE("haar limit membership") {
  CHECK(haar_limit_membership(cvec({0, 0})));
  CHECK(haar_limit_membership(cvec({0.3, cplx(0, -0.2)})));
  CHECK(haar_limit_membership(cvec({1, 0})));
  CHECK_FALSE(haar_limit_membership(cvec({1.01, 0})));
  int bad = 0;
  for (int a = -12; a <= 12; ++a)
    for (int b = -12; b <= 12; ++b) {
      const cplx z(a / 10.0 + 0.003, b / 10.0 + 0.007);
      bad += haar_limit_membership(cvec({z})) != (std::abs(z) <= 1.0);
    }
  CHECK(bad == 0);

  std::mt19937_64 g(3);
  bad = 0;
  for (int k = 0; k < 1000; ++k) {
    CVec w = random_complex(g, 2, 1).col(0) * 0.5;
    const bool in = haar_limit_membership(w);
    CVec r = w;
    for (int i = 0; i < 2; ++i) r(i) *= std::polar(1.0, 0.7 + 1.3 * i + k);
    bad += haar_limit_membership(r) != in;
    if (haar_Q_support_value(w) <= 1.0) bad += !in;
  }
  CHECK(bad == 0);
}

TEST_CASE("haar limit cloud") {
  const RMat c1 = limit_boundary_cloud(LimitKind::haar, 1, 360);
  CHECK((c1.rowwise().norm().array() - 1.0).abs().maxCoeff() < 1e-8);

  const RMat c2 = limit_boundary_cloud(LimitKind::haar, 2, 2000);
  CHECK(c2.rowwise().norm().minCoeff() > 0.3);
  int off = 0;
  for (int k = 0; k < c2.rows(); ++k) {
    CVec w(2);
    w << cplx(c2(k, 0), c2(k, 1)), cplx(c2(k, 2), c2(k, 3));
    off += std::abs(haar_Q_support_value(w) - 1.0) > 1e-8;
  }
  CHECK(off == 0);
  // Support of the body against the cloud: never exceeded, nearly attained.
  std::mt19937_64 g(4);
  for (int k = 0; k < 20; ++k) {
    RVec th = random_vec(g, 4);
    th.normalize();
    const double h = haar_limit_support(th);
    const double m = (c2 * th).maxCoeff();
    CHECK(m <= h + 1e-9);
    CHECK(m >= h - 0.08);
  }
  for (int k = 0; k < 20; ++k) {
    const int d = 1 + k % 3;
    RVec th = random_vec(g, 2 * d);
    const RVec w = haar_limit_support_point(th);
    CHECK(th.dot(w) == doctest::Approx(haar_limit_support(th)).epsilon(1e-7));
    CVec wc(d);
    for (int i = 0; i < d; ++i) wc(i) = cplx(w(2 * i), w(2 * i + 1));
    CHECK(haar_Q_support_value(wc) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(limit_boundary_cloud(LimitKind::haar, 4, 10), Error);
  CHECK(parse_limit_kind("haar") == LimitKind::haar);
}
