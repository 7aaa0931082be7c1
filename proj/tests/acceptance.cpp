#include <algorithm>
#include <iostream>

#include "wreathcycle/acceptance.hpp"

int main() {
  using namespace wreathcycle;
  const auto results = run_acceptance_suite({false, kDefaultSeed, default_threads()});
  std::cout << format_table(results);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
  std::cout << (ok ? "all criteria passed" : "some criteria failed") << "\n";
  return ok ? 0 : 1;
}
