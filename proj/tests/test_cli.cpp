#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " MATRANGE_CLI " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

int data_rows(const std::string& csv) {
  int n = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    if (csv[pos] != '#') ++n;
    pos = csv.find('\n', pos) + 1;
  }
  return n - 1;
}

}  // namespace

TEST_CASE("converge writes a header, one row per trial and a summary block") {
  const auto r = run("converge --kind wigner --d 2 --Ns 100,200 --trials 2 --seed 1 --out cli_t.csv");
  CHECK(r.code == 0);
  const std::string csv = slurp("cli_t.csv");
  CHECK(data_rows(csv) == 4);
  CHECK(csv.rfind("N,trial,seed,", 0) == 0);
  CHECK(csv.find("\n# median,200,") != std::string::npos);
  CHECK(csv.find("\n# seed = 1\n") != std::string::npos);
  // Byte-identical on rerun and under a different thread count.
  CHECK(run("converge --kind wigner --d 2 --Ns 100,200 --trials 2 --seed 1").out == csv);
  CHECK(run("converge --kind wigner --d 2 --Ns 100,200 --trials 2 --seed 1", "MATRANGE_THREADS=1").out == csv);
}

TEST_CASE("config file supplies defaults, flags override") {
  {
    std::ofstream f("cli_conv.cfg");
    f << "kind = wigner\nd = 2\nNs = 40,80\ntrials = 3\nseed = 5\nK = 60\n";
  }
  const auto a = run("--config cli_conv.cfg converge");
  CHECK(a.code == 0);
  CHECK(data_rows(a.out) == 6);
  CHECK(a.out.find("# flag --config = cli_conv.cfg") == std::string::npos);
  const auto b = run("converge --config cli_conv.cfg --trials 1");
  CHECK(data_rows(b.out) == 2);
  CHECK(b.out.find("# trials = 1") != std::string::npos);
  CHECK(b.out.find("# seed = 5") != std::string::npos);
}

TEST_CASE("sample is deterministic and round-trips through norm") {
  const auto a = run("sample --kind wigner --d 2 --N 4 --seed 9");
  CHECK(a.code == 0);
  CHECK(a.out == run("sample --kind wigner --d 2 --N 4 --seed 9").out);
  CHECK(a.out != run("sample --kind wigner --d 2 --N 4 --seed 10").out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["d"] == 2);
  CHECK(j["n"] == 4);
  CHECK(j["selfadjoint"] == true);
  // A Haar unitary is realified; its level-1 range lies in the unit disc.
  CHECK(run("sample --kind haar --d 1 --N 3 --seed 1 --out cli_u.json").code == 0);
  const auto s = run("range support --tuple cli_u.json --K 16");
  CHECK(s.code == 0);
  CHECK(s.out.find("# max support") != std::string::npos);
}

TEST_CASE("norm of the counterexample pair stays below 8") {
  {
    std::ofstream f("cli_a12.json");
    const double r = std::sqrt(7.0);
    nlohmann::json m1 = {{r, 0}, {1, 0}, {1, 0}, {1 / r, 0}}, m2 = {{r, 0}, {-1, 0}, {-1, 0}, {1 / r, 0}};
    f << nlohmann::json{{"d", 2}, {"n", 2}, {"selfadjoint", true}, {"matrices", {m1, m2}}}.dump();
  }
  const auto r = run("norm --oracle lmi --tuple cli_a12.json");
  CHECK(r.code == 0);
  const double v = nlohmann::json::parse(r.out)["value"];
  CHECK(v < 8);
  CHECK(v > 7.7);
  const double f = nlohmann::json::parse(run("norm --oracle fock --m 6 --tuple cli_a12.json").out)["value"];
  CHECK(f <= v + 1e-6);
}

TEST_CASE("fock, limits and range outputs") {
  const auto f = nlohmann::json::parse(run("fock --d 2 --m 3").out);
  CHECK(f["n"] == 15);
  const auto l = run("limits --kind wigner --d 2 --K 8");
  CHECK(l.out.rfind("theta_1,theta_2,support,x_1,x_2\n", 0) == 0);
  CHECK(data_rows(l.out) == 8);
  CHECK(run("fock --d 2 --m 3 --out cli_s.json").code == 0);
  const auto b = run("range boundary --tuple cli_s.json --K 12");
  CHECK(b.code == 0);
  CHECK(data_rows(b.out) == 12);
  CHECK(b.out.find("\n# max support") != std::string::npos);
}

TEST_CASE("errors are reported as JSON with exit codes") {
  auto r = run("no-such-command");
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.out)["status"] == "usage");
  r = run("converge --Ns 200,100");
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.out)["message"].get<std::string>().find("increasing") != std::string::npos);
  r = run("norm --tuple does-not-exist.json");
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.out)["error"] == "io");
  r = run("selftest --criteria 2,4");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS  2") != std::string::npos);
  CHECK(r.out.find("PASS  4") != std::string::npos);
}
