#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aquifer {

/// Outcome of one randomized property suite.
struct SuiteResult {
  std::string name;
  bool passed = true;
  int checks = 0;
  std::string detail;  // first failure, empty on success
};

/// Names of the property suites, one per library module.
std::vector<std::string> suite_names();

/// Runs every suite whose name contains `filter` (all when empty).
std::vector<SuiteResult> run_suites(std::uint64_t seed, const std::string& filter = {});

/// `PASS <name> (<checks> checks)` or `FAIL <name>: <detail>`.
std::string format_result(const SuiteResult& result);

}  // namespace aquifer
