#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqspace/check.hpp"
#include "seqspace/sequence.hpp"

namespace seqspace::verify {

struct BatteryConfig {
  std::uint64_t seed = 42;
  /// Base truncation; criteria with their own pinned sizes ignore it.
  Index truncation = 64;
  Tolerances tolerances;
  /// Substring of a module name; empty runs everything.
  std::string filter;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string module;
  bool pass = false;
  /// Smallest margin observed; negative on failure.
  double worst_slack = 0.0;
  std::string detail;
};

struct CriterionInfo {
  int id;
  const char* name;
  const char* module;
};

const std::vector<CriterionInfo>& criteria();

/// Runs the selected criteria in id order. Criterion 13 reruns the others
/// and compares the formatted reports byte for byte.
std::vector<CriterionResult> run_battery(const BatteryConfig& config);

CriterionResult run_criterion(int id, const BatteryConfig& config);

/// One line per criterion; contains no timing or other run-dependent data.
std::string format_line(const CriterionResult& result);
std::string format_report(const std::vector<CriterionResult>& results);

}  // namespace seqspace::verify
