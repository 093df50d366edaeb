#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "matrange/ensembles.hpp"
#include "matrange/limits.hpp"
#include "matrange/ranges.hpp"

namespace matrange {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kMaxHarnessN = 2000;

struct ExperimentConfig {
  EnsembleKind kind = EnsembleKind::wigner;
  EntryDistribution entries = EntryDistribution::gaussian;
  int d = 2;
  std::vector<int> Ns{100};
  int trials = 1;
  std::uint64_t seed = 0;
  int K = 720;     // directions
  int level = 1;
  double tol = 1e-7;
  bool timing = false;  // wall time breaks byte-identical reruns, so it is opt-in

  LimitKind limit() const { return kind == EnsembleKind::wigner ? LimitKind::wigner : LimitKind::haar; }
  void validate() const;
};

// Seed of trial t at size N; independent of the other Ns and of scheduling.
std::uint64_t trial_seed(std::uint64_t seed, int N, int trial);
// Realified when the ensemble is not selfadjoint.
MatrixTuple sample_trial(const ExperimentConfig& cfg, int N, int trial);

// CSV with a header row and a trailing '#' block (summary, then provenance).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> summary;
  std::vector<std::pair<std::string, std::string>> provenance;
  std::string csv() const;
};

std::string format_number(double x);
void write_text(const std::string& path, const std::string& text);
double median(std::vector<double> v);  // NaN entries dropped; NaN if none left

struct ConvergenceRow {
  int N = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double hausdorff = 0.0;          // cloud distance to the limit cloud
  double support_deviation = 0.0;  // max over directions |h_X - h_limit|
  double seconds = 0.0;
  std::string error;               // numerical failure, recorded instead of thrown
};

struct ConvergenceTable {
  ExperimentConfig config;
  std::vector<ConvergenceRow> rows;
  // (N, median hausdorff, median support deviation), Ns in order
  std::vector<std::pair<int, std::pair<double, double>>> medians() const;
  Table table() const;
};

ConvergenceTable run_converge(const ExperimentConfig& cfg);

struct NormRow {
  int N = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double empirical = 0.0;
  double limit = 0.0;
  double deviation = 0.0;
  double seconds = 0.0;
  std::string error;
};

struct NormTable {
  ExperimentConfig config;
  std::string quantity;
  std::vector<NormRow> rows;
  std::vector<std::pair<int, double>> median_empirical() const;
  std::vector<std::pair<int, double>> median_deviation() const;
  Table table() const;
};

// ||sum a_i (x) X_i^N|| against the semicircular norm of (a_i); a0 must vanish.
NormTable run_poly_norms(const ExperimentConfig& cfg, const LinearPencil& p);
// lambda_max(sum (X_i^N)^2) against (1 + sqrt d)^2.
NormTable run_square_sum(const ExperimentConfig& cfg);

}  // namespace matrange
