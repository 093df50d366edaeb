#include "matrange/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "matrange/error.hpp"
#include "matrange/free_norms.hpp"
#include "matrange/kernels.hpp"
#include "matrange/parallel.hpp"

namespace matrange {

namespace {

using Clock = std::chrono::steady_clock;

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

// CSV-safe single line.
std::string clean(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  return s;
}

std::string ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::pair<std::string, std::string>> config_provenance(const ExperimentConfig& c) {
  return {{"version", kVersion},
          {"simd", kernels::isa_name(kernels::active_isa())},
          {"kind", to_string(c.kind)},
          {"entries", to_string(c.entries)},
          {"d", std::to_string(c.d)},
          {"Ns", ints(c.Ns)},
          {"trials", std::to_string(c.trials)},
          {"seed", std::to_string(c.seed)},
          {"K", std::to_string(c.K)},
          {"level", std::to_string(c.level)},
          {"tol", format_number(c.tol)}};
}

struct Job {
  int N, trial;
};

std::vector<Job> jobs_of(const ExperimentConfig& cfg) {
  std::vector<Job> jobs;
  for (int N : cfg.Ns)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({N, t});
  return jobs;
}

template <class Row>
std::vector<std::pair<int, double>> per_N_median(const std::vector<int>& Ns, const std::vector<Row>& rows,
                                                 double Row::*field) {
  std::vector<std::pair<int, double>> out;
  for (int N : Ns) {
    std::vector<double> v;
    for (const auto& r : rows)
      if (r.N == N && r.error.empty()) v.push_back(r.*field);
    out.emplace_back(N, median(v));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(d >= 1, ErrorKind::precondition, "config: d >= 1");
  require(!Ns.empty(), ErrorKind::precondition, "config: Ns must not be empty");
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    require(Ns[i] >= 1 && Ns[i] <= kMaxHarnessN, ErrorKind::precondition, "config: N out of range [1, 2000]");
    require(i == 0 || Ns[i] > Ns[i - 1], ErrorKind::precondition, "config: Ns must be strictly increasing");
  }
  require(trials >= 1, ErrorKind::precondition, "config: trials >= 1");
  require(K >= 1 && static_cast<std::size_t>(K) <= kMaxCloudPoints, ErrorKind::precondition,
          "config: K out of range");
  require(tol > 0, ErrorKind::precondition, "config: tol > 0");
  require(level >= 1, ErrorKind::precondition, "config: level >= 1");
}

std::uint64_t trial_seed(std::uint64_t seed, int N, int trial) {
  return derive_seed(seed, (static_cast<std::uint64_t>(N) << 32) | static_cast<std::uint32_t>(trial));
}

MatrixTuple sample_trial(const ExperimentConfig& cfg, int N, int trial) {
  EnsembleSpec s;
  s.kind = cfg.kind;
  s.d = cfg.d;
  s.N = N;
  s.entries = cfg.entries;
  s.seed = trial_seed(cfg.seed, N, trial);
  MatrixTuple X = sample(s);
  return X.selfadjoint ? X : realify(X);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string Table::csv() const {
  std::ostringstream os;
  os << join(header) << '\n';
  for (const auto& r : rows) os << join(r) << '\n';
  for (const auto& s : summary) os << "# " << s << '\n';
  for (const auto& [k, v] : provenance) os << "# " << k << " = " << v << '\n';
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::io, ("cannot open '" + path + "' for writing").c_str());
  f << text;
  require(static_cast<bool>(f), ErrorKind::io, ("write failed for '" + path + "'").c_str());
}

double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// ---------------------------------------------------------------- converge

ConvergenceTable run_converge(const ExperimentConfig& cfg) {
  cfg.validate();
  require(cfg.level == 1, ErrorKind::precondition, "converge: analytic limits are known at level 1 only");
  require(cfg.kind != EnsembleKind::ginibre, ErrorKind::precondition, "converge: no limit body for ginibre");
  if (cfg.kind == EnsembleKind::haar_unitary)
    require(cfg.d <= 3, ErrorKind::precondition, "converge: haar limit body needs d <= 3");

  const RMat limit_pts = limit_boundary_cloud(cfg.limit(), cfg.d, cfg.K);
  const PointCloud limit_cloud = cloud_from_rows(limit_pts);
  const auto jobs = jobs_of(cfg);
  ConvergenceTable out;
  out.config = cfg;
  out.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    ConvergenceRow& row = out.rows[j];
    row.N = jobs[j].N;
    row.trial = jobs[j].trial;
    row.seed = trial_seed(cfg.seed, row.N, row.trial);
    const auto t0 = Clock::now();
    try {
      const MatrixTuple X = sample_trial(cfg, row.N, row.trial);
      const SupportCloud sc = boundary_level1(X, cfg.K);
      row.hausdorff = hausdorff_cloud(sc.cloud(), limit_cloud);
      double dev = 0.0;
      for (int k = 0; k < sc.directions.rows(); ++k) {
        const RVec th = sc.directions.row(k).transpose();
        const double h = cfg.limit() == LimitKind::wigner ? wigner_limit_support(cfg.d, th) : haar_limit_support(th);
        dev = std::max(dev, std::abs(sc.values(k) - h));
      }
      row.support_deviation = dev;
    } catch (const Error& e) {
      row.hausdorff = row.support_deviation = std::nan("");
      row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  });
  return out;
}

std::vector<std::pair<int, std::pair<double, double>>> ConvergenceTable::medians() const {
  const auto h = per_N_median(config.Ns, rows, &ConvergenceRow::hausdorff);
  const auto s = per_N_median(config.Ns, rows, &ConvergenceRow::support_deviation);
  std::vector<std::pair<int, std::pair<double, double>>> out;
  for (std::size_t i = 0; i < h.size(); ++i) out.push_back({h[i].first, {h[i].second, s[i].second}});
  return out;
}

Table ConvergenceTable::table() const {
  Table t;
  t.header = {"N", "trial", "seed", "hausdorff", "support_deviation"};
  if (config.timing) t.header.push_back("seconds");
  t.header.push_back("error");
  for (const auto& r : rows) {
    std::vector<std::string> line{std::to_string(r.N), std::to_string(r.trial), std::to_string(r.seed),
                                  format_number(r.hausdorff), format_number(r.support_deviation)};
    if (config.timing) line.push_back(format_number(r.seconds));
    line.push_back(clean(r.error));
    t.rows.push_back(std::move(line));
  }
  t.summary.push_back("summary: N,median_hausdorff,median_support_deviation");
  for (const auto& [N, m] : medians())
    t.summary.push_back("median," + std::to_string(N) + "," + format_number(m.first) + "," + format_number(m.second));
  t.provenance = config_provenance(config);
  t.provenance.insert(t.provenance.begin(), {"command", "converge"});
  t.provenance.push_back({"limit", to_string(config.limit())});
  return t;
}

// ---------------------------------------------------------------- norms

namespace {

template <class F>
NormTable run_norms(const ExperimentConfig& cfg, std::string quantity, double limit, F empirical) {
  const auto jobs = jobs_of(cfg);
  NormTable out;
  out.config = cfg;
  out.quantity = std::move(quantity);
  out.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    NormRow& row = out.rows[j];
    row.N = jobs[j].N;
    row.trial = jobs[j].trial;
    row.seed = trial_seed(cfg.seed, row.N, row.trial);
    row.limit = limit;
    const auto t0 = Clock::now();
    try {
      row.empirical = empirical(sample_trial(cfg, row.N, row.trial));
      row.deviation = std::abs(row.empirical - limit);
    } catch (const Error& e) {
      row.empirical = row.deviation = std::nan("");
      row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  });
  return out;
}

}  // namespace

NormTable run_poly_norms(const ExperimentConfig& cfg, const LinearPencil& p) {
  cfg.validate();
  require(cfg.kind == EnsembleKind::wigner, ErrorKind::precondition, "poly norms: wigner ensemble only");
  require(p.d() == cfg.d, ErrorKind::dimension, "poly norms: pencil has the wrong number of variables");
  require(p.a0.norm() == 0.0, ErrorKind::precondition, "poly norms: pencil must have no constant term");
  const MatrixTuple coeffs = make_tuple(p.a, true);
  const double limit = lehner_semicircular_norm(coeffs, cfg.tol);
  return run_norms(cfg, "pencil_norm", limit, [&](const MatrixTuple& X) { return pencil_value_norm(p, X); });
}

NormTable run_square_sum(const ExperimentConfig& cfg) {
  cfg.validate();
  require(cfg.kind == EnsembleKind::wigner, ErrorKind::precondition, "square sum: wigner ensemble only");
  const double limit = shifted_shift_norm(cfg.d).value;
  return run_norms(cfg, "square_sum", limit, [](const MatrixTuple& X) { return lambda_max(sum_squares(X)); });
}

std::vector<std::pair<int, double>> NormTable::median_empirical() const {
  return per_N_median(config.Ns, rows, &NormRow::empirical);
}

std::vector<std::pair<int, double>> NormTable::median_deviation() const {
  return per_N_median(config.Ns, rows, &NormRow::deviation);
}

Table NormTable::table() const {
  Table t;
  t.header = {"N", "trial", "seed", "empirical", "limit", "deviation"};
  if (config.timing) t.header.push_back("seconds");
  t.header.push_back("error");
  for (const auto& r : rows) {
    std::vector<std::string> line{std::to_string(r.N),        std::to_string(r.trial),
                                  std::to_string(r.seed),     format_number(r.empirical),
                                  format_number(r.limit),     format_number(r.deviation)};
    if (config.timing) line.push_back(format_number(r.seconds));
    line.push_back(clean(r.error));
    t.rows.push_back(std::move(line));
  }
  t.summary.push_back("summary: N,median_empirical,median_deviation");
  const auto e = median_empirical(), v = median_deviation();
  for (std::size_t i = 0; i < e.size(); ++i)
    t.summary.push_back("median," + std::to_string(e[i].first) + "," + format_number(e[i].second) + "," +
                        format_number(v[i].second));
  t.provenance = config_provenance(config);
  t.provenance.insert(t.provenance.begin(), {"command", quantity});
  return t;
}

}  // namespace matrange
