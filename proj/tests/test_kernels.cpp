#include <random>

#include "doctest.h"
#include "matrange/kernels.hpp"
#include "test_util.hpp"

using namespace matrange;
namespace k = matrange::kernels;

namespace {
std::vector<double> randv(std::mt19937_64& g, std::size_t n) {
  std::normal_distribution<double> N(0, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = N(g);
  return v;
}
}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  if (!k::isa_available(k::Isa::avx2)) {
    MESSAGE("AVX2 not available on this host; equivalence test skipped");
    return;
  }
  std::mt19937_64 g(42);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 33u, 1000u}) {
    const auto a = randv(g, n), b = randv(g, n);
    const double s = k::scalar::dot(a.data(), b.data(), n);
    const double v = k::avx2::dot(a.data(), b.data(), n);
    CHECK(std::abs(s - v) <= 1e-12 * (1.0 + std::abs(s)));
  }
  for (int rows : {1, 2, 5, 16, 63}) {
    const CMat A = testutil::random_complex(g, rows, rows + 3);
    const CVec x = testutil::random_complex(g, rows + 3, 1);
    CVec ys(rows), yv(rows);
    k::scalar::cgemv(A.data(), rows, rows + 3, x.data(), ys.data());
    k::avx2::cgemv(A.data(), rows, rows + 3, x.data(), yv.data());
    CHECK((ys - yv).norm() <= 1e-12 * (1.0 + ys.norm()));
    CHECK((ys - A * x).norm() <= 1e-12 * (1.0 + ys.norm()));
  }
  for (std::size_t npts : {1u, 3u, 4u, 5u, 17u, 720u})
    for (std::size_t dim : {1u, 2u, 4u, 7u}) {
      const auto soa = randv(g, npts * dim);
      const auto q = randv(g, dim);
      const double s1 = k::scalar::min_sq_dist(soa.data(), npts, dim, npts, q.data());
      const double v1 = k::avx2::min_sq_dist(soa.data(), npts, dim, npts, q.data());
      CHECK(std::abs(s1 - v1) <= 1e-12 * (1.0 + s1));
      const double s2 = k::scalar::max_dot(soa.data(), npts, dim, npts, q.data());
      const double v2 = k::avx2::max_dot(soa.data(), npts, dim, npts, q.data());
      CHECK(std::abs(s2 - v2) <= 1e-12 * (1.0 + std::abs(s2)));
    }
}

TEST_CASE("dispatcher can be forced to the scalar path") {
  const auto before = k::active_isa();
  k::set_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  const double a[3] = {1, 2, 3}, b[3] = {4, 5, 6};
  CHECK(k::dot(a, b, 3) == 32.0);
  k::set_isa(before);
  CHECK(k::active_isa() == before);
}
