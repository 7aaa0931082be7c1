#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wreathcycle/rng.hpp"

namespace wreathcycle {

struct SuiteOptions {
  bool quick = false;  // reduced sample counts, same checks
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

struct CriterionResult {
  std::string id;
  std::string label;
  bool pass = false;
  std::string detail;
};

/// Runs the acceptance criteria in order. Output depends only on `quick` and
/// `seed`, never on `threads`.
std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options);

/// One "PASS|FAIL  id  label  detail" line per criterion.
std::string format_table(const std::vector<CriterionResult>& results);

}  // namespace wreathcycle
