// One line per acceptance criterion; exit status 1 if any fails.
// Arguments select criteria by id (default: all).
#include <cstdlib>
#include <iostream>
#include <string>

#include "matrange/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= matrange::kCriteria; ++i) ids.push_back(i);
  bool ok = true;
  for (int id : ids) {
    const auto r = matrange::run_criterion(id);
    std::cout << matrange::format_line(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}
