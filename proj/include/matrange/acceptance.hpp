#pragma once

#include <cstdint>
#include "json.hpp"
#include <string>
#include <vector>

namespace matrange {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
};

inline constexpr int kCriteria = 10;
// Criteria that finish in seconds; `selftest --quick` runs these.
std::vector<int> quick_criteria();

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opt = {});

// "PASS  3  title  detail  [1.2 s]"
std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

}  // namespace matrange
