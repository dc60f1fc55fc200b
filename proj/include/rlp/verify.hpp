#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rlp {

struct VerifyConfig {
  std::uint64_t seed = 1;
  /// Supercritical elasticity used by the two-regime checks.
  double c = 0.5;
  /// Sample sizes divided by 10 and tolerances doubled.
  bool quick = false;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// Check ids to run; empty runs all.
  std::vector<int> only;
};

struct CheckResult {
  int id = 0;
  std::string anchor;
  /// "<=" when the statistic must not exceed the threshold, ">=" otherwise.
  std::string comparison = "<=";
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  /// Sub-measures, sorted by name in the report.
  std::vector<std::pair<std::string, double>> details;
  /// Set when the check could not run; the check then fails.
  std::string error;
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<CheckResult> checks;
  bool all_pass() const;
  /// JSON report, schema 1. Contains no timings, so equal inputs give
  /// byte-identical output.
  std::string to_json() const;
};

inline constexpr int kCheckCount = 15;

/// Short description of check id (1-based).
const char* check_anchor(int id);

/// Runs the selected checks. Every check draws from its own stream derived
/// from (seed, check id), and shared precomputations from streams of their
/// own, so the report does not depend on the thread count.
VerifyReport run_verify(const VerifyConfig& cfg);

}  // namespace rlp
