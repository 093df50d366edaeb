#include <cmath>

#include "doctest.h"
#include "matrange/error.hpp"
#include "matrange/harness.hpp"
#include "test_util.hpp"

using namespace matrange;

namespace {

ExperimentConfig small(EnsembleKind kind, int d, std::vector<int> Ns, int trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.kind = kind;
  c.d = d;
  c.Ns = std::move(Ns);
  c.trials = trials;
  c.seed = seed;
  c.K = 90;
  return c;
}

int count_data_rows(const std::string& csv) {
  int n = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const auto end = csv.find('\n', pos);
    if (csv[pos] != '#') ++n;
    pos = end + 1;
  }
  return n - 1;  // header
}

}  // namespace

TEST_CASE("config validation") {
  auto c = small(EnsembleKind::wigner, 2, {200, 100}, 1, 0);
  CHECK_THROWS_AS(c.validate(), Error);
  c.Ns = {100, 100};
  CHECK_THROWS_AS(c.validate(), Error);
  c.Ns = {100};
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.trials = 1;
  c.Ns = {2001};
  CHECK_THROWS_AS(c.validate(), Error);
  c.Ns = {10};
  CHECK_NOTHROW(c.validate());
  c.level = 2;
  CHECK_THROWS_AS(run_converge(c), Error);
}

TEST_CASE("trial seeds") {
  CHECK(trial_seed(7, 100, 0) != trial_seed(7, 100, 1));
  CHECK(trial_seed(7, 100, 0) != trial_seed(7, 200, 0));
  CHECK(trial_seed(7, 100, 0) != trial_seed(8, 100, 0));
  CHECK(trial_seed(7, 100, 3) == trial_seed(7, 100, 3));
}

TEST_CASE("converge table shape") {
  const auto t = run_converge(small(EnsembleKind::wigner, 2, {100, 200}, 2, 1));
  CHECK(t.rows.size() == 4);
  const std::string csv = t.table().csv();
  CHECK(count_data_rows(csv) == 4);
  CHECK(csv.rfind("N,trial,seed,hausdorff,support_deviation,error\n", 0) == 0);
  CHECK(csv.find("# median,100,") != std::string::npos);
  CHECK(csv.find("# seed = 1") != std::string::npos);
  for (const auto& r : t.rows) {
    CHECK(r.error.empty());
    CHECK(r.hausdorff >= 0);
    CHECK(r.support_deviation >= 0);
    // The cloud distance is at least the support-function gap up to the grid.
    CHECK(r.hausdorff < 1.0);
  }
  // Degenerate size: one row per trial
  const auto d = run_converge(small(EnsembleKind::wigner, 2, {4}, 3, 2));
  CHECK(d.rows.size() == 3);
}

TEST_CASE("converge is deterministic and independent of thread count") {
  const auto c = small(EnsembleKind::wigner, 2, {60, 120}, 3, 5);
  const std::string a = run_converge(c).table().csv();
  setenv("MATRANGE_THREADS", "1", 1);
  const std::string b = run_converge(c).table().csv();
  setenv("MATRANGE_THREADS", "3", 1);
  const std::string e = run_converge(c).table().csv();
  unsetenv("MATRANGE_THREADS");
  CHECK(a == b);
  CHECK(a == e);
  auto timed = c;
  timed.timing = true;
  CHECK(run_converge(timed).table().header.size() == 7);
}

TEST_CASE("haar convergence at d = 1") {
  auto c = small(EnsembleKind::haar_unitary, 1, {500}, 5, 3);
  c.K = 720;
  const auto t = run_converge(c);
  CHECK(t.medians()[0].second.first < 0.1);
  CHECK(t.medians()[0].second.second < 0.01);
}

TEST_CASE("square sum and pencil norms") {
  auto c = small(EnsembleKind::wigner, 2, {100, 400}, 3, 4);
  const auto s = run_square_sum(c);
  CHECK(s.rows.front().limit == doctest::Approx(std::pow(1 + std::sqrt(2.0), 2)).epsilon(1e-9));
  CHECK(std::abs(s.median_empirical()[1].second - s.rows.front().limit) < 0.4);

  LinearPencil p;
  p.a0 = CMat::Zero(1, 1);
  p.a = {CMat::Ones(1, 1), CMat::Zero(1, 1)};
  const auto n = run_poly_norms(c, p);
  CHECK(n.rows.front().limit == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(n.median_deviation()[1].second < 0.2);
  CHECK(n.table().csv() == run_poly_norms(c, p).table().csv());

  p.a0 = CMat::Ones(1, 1);
  CHECK_THROWS_AS(run_poly_norms(c, p), Error);
  c.kind = EnsembleKind::haar_unitary;
  CHECK_THROWS_AS(run_square_sum(c), Error);
}
