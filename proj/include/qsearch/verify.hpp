#pragma once

#include <string>
#include <vector>

namespace qsearch::verify {

struct SuiteResult {
  std::string name;
  long cases = 0;
  long failures = 0;
  std::vector<std::string> failure_details;  // first few failing cases
};

struct VerifyOptions {
  unsigned seed = 20240901;
  /// Offsets the estimator's query count in the agreement suite; used to
  /// prove the harness actually fails on a broken count convention.
  long count_fault_offset = 0;
  /// Smaller sweeps for quick runs.
  bool quick = false;
};

std::vector<std::string> suite_names();

/// Runs the named suites (all when the filter is empty) and returns one
/// result per suite.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& only,
                                    const VerifyOptions& opts);

}  // namespace qsearch::verify
