#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "matrange/ensembles.hpp"
#include "matrange/error.hpp"

using namespace matrange;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return best;
}

// One-sample KS against U[0,1).
double ks_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double best = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    best = std::max({best, (k + 1) / n - u[k], u[k] - k / n});
  return best;
}

double offdiag_mean_sq(const CMat& X) {
  double s = 0.0;
  const int N = static_cast<int>(X.rows());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) s += std::norm(X(i, j));
  return s / (N * (N - 1.0));
}

EnsembleSpec spec_of(EnsembleKind k, int d, int N, std::uint64_t seed, std::uint64_t stream = 0) {
  EnsembleSpec s;
  s.kind = k;
  s.d = d;
  s.N = N;
  s.seed = seed;
  s.stream = stream;
  return s;
}

}  // namespace

TEST_CASE("rng streams are reproducible and uncorrelated") {
  RngStream a(42, 0), b(42, 0), c(42, 1);
  for (int k = 0; k < 1000; ++k) CHECK(a.next() == b.next());
  RngStream x(42, 0);
  double sxy = 0, sxx = 0, syy = 0;
  for (int k = 0; k < 100000; ++k) {
    const double u = x.normal(), v = c.normal();
    sxy += u * v;
    sxx += u * u;
    syy += v * v;
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.02);

  const auto w0 = sample_wigner(spec_of(EnsembleKind::wigner, 1, 300, 9, 0));
  const auto w1 = sample_wigner(spec_of(EnsembleKind::wigner, 1, 300, 9, 1));
  double p = 0, q = 0, r = 0;
  for (int i = 0; i < 300; ++i)
    for (int j = i + 1; j < 300; ++j) {
      const double u = w0[0](i, j).real(), v = w1[0](i, j).real();
      p += u * v;
      q += u * u;
      r += v * v;
    }
  CHECK(std::abs(p / std::sqrt(q * r)) < 0.02);
}

TEST_CASE("uniform and normal sanity") {
  RngStream r(3, 0);
  double m = 0, v = 0;
  const int n = 200000;
  int outside = 0;
  for (int k = 0; k < n; ++k) {
    const double u = r.uniform();
    outside += (u < 0.0 || u >= 1.0);
    m += u;
  }
  CHECK(outside == 0);
  CHECK(std::abs(m / n - 0.5) < 0.005);
  m = 0;
  for (int k = 0; k < n; ++k) {
    const double z = r.normal();
    m += z;
    v += z * z;
  }
  CHECK(std::abs(m / n) < 0.01);
  CHECK(std::abs(v / n - 1.0) < 0.01);
}

TEST_CASE("wigner normalization") {
  const auto s = spec_of(EnsembleKind::wigner, 2, 50, 7);
  const auto A = sample_wigner(s), B = sample_wigner(s);
  for (int i = 0; i < 2; ++i) {
    CHECK((A[i] - B[i]).norm() == 0.0);
    CHECK((A[i] - A[i].adjoint()).norm() == 0.0);
  }
  CHECK(A.selfadjoint);

  for (auto dist : {EntryDistribution::gaussian, EntryDistribution::rademacher, EntryDistribution::uniform}) {
    double v = 0;
    const int draws = 100000;
    for (int t = 0; t < draws; ++t) {
      auto sp = spec_of(EnsembleKind::wigner, 1, 1, 5, static_cast<std::uint64_t>(t));
      sp.entries = dist;
      const double x = sample_wigner(sp)[0](0, 0).real();
      v += x * x;
    }
    CHECK(std::abs(v / draws - 1.0) < 0.03);
  }

  double acc = 0;
  for (int t = 0; t < 100; ++t)
    acc += offdiag_mean_sq(sample_wigner(spec_of(EnsembleKind::wigner, 1, 100, 11, t))[0]);
  CHECK(std::abs(acc / 100 - 0.01) < 0.0005);
}

TEST_CASE("haar unitaries") {
  const auto U = sample_haar(spec_of(EnsembleKind::haar_unitary, 2, 200, 1));
  for (int i = 0; i < 2; ++i)
    CHECK((U[i].adjoint() * U[i] - CMat::Identity(200, 200)).cwiseAbs().maxCoeff() <= 1e-12 * 200);

  std::vector<double> phases;
  for (int t = 0; t < 10000; ++t) {
    const cplx z = sample_haar(spec_of(EnsembleKind::haar_unitary, 1, 1, 2, t))[0](0, 0);
    phases.push_back((std::arg(z) + std::numbers::pi) / (2 * std::numbers::pi));
  }
  CHECK(ks_uniform(phases) < 1.63 / std::sqrt(10000.0));

  for (int N : {1, 2, 50}) {
    double m = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t)
      m += std::norm(sample_haar(spec_of(EnsembleKind::haar_unitary, 1, N, 3, t))[0].trace());
    CHECK(std::abs(m / draws - 1.0) < 0.05);
  }
}

TEST_CASE("haar invariance under a fixed unitary") {
  const CMat V = sample_haar(spec_of(EnsembleKind::haar_unitary, 1, 8, 99))[0];
  std::vector<double> a, b;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    a.push_back(std::abs(sample_haar(spec_of(EnsembleKind::haar_unitary, 1, 8, 4, t))[0].trace()));
    b.push_back(std::abs((V * sample_haar(spec_of(EnsembleKind::haar_unitary, 1, 8, 5, t))[0]).trace()));
  }
  CHECK(ks_two_sample(a, b) < 1.63 * std::sqrt(2.0 / draws));
}

TEST_CASE("ginibre") {
  const auto s = spec_of(EnsembleKind::ginibre, 2, 100, 8);
  const auto G = sample_ginibre(s), H = sample_ginibre(s);
  CHECK((G[0] - H[0]).norm() == 0.0);
  double e = 0, h = 0;
  for (int t = 0; t < 100; ++t) {
    const CMat g = sample_ginibre(spec_of(EnsembleKind::ginibre, 1, 100, 12, t))[0];
    e += offdiag_mean_sq(g);
    h += offdiag_mean_sq(std::sqrt(2.0) * 0.5 * (g + g.adjoint()));
  }
  CHECK(std::abs(e / 100 - 0.01) < 0.0005);
  CHECK(std::abs(h / 100 - 0.01) < 0.0005);
}

TEST_CASE("sampler preconditions") {
  CHECK_THROWS_AS(sample_haar(spec_of(EnsembleKind::wigner, 1, 4, 0)), Error);
  CHECK_THROWS_AS(sample_wigner(spec_of(EnsembleKind::wigner, 0, 4, 0)), Error);
  CHECK_THROWS_AS(parse_entry_distribution("cauchy"), Error);
  CHECK(parse_ensemble_kind("haar") == EnsembleKind::haar_unitary);
}
