#pragma once

#include <string>
#include <vector>

namespace seqspace {

struct Tolerances {
  /// Relative tolerance for identities that hold up to rounding.
  double algebraic = 1e-12;
  /// Slack allowed on inequalities.
  double inequality = 1e-9;
};

/// One recorded inequality or identity. `slack` is the margin by which the
/// check passes; a check passes iff slack >= 0.
struct Check {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// lhs <= rhs + tolerance
Check check_le(std::string name, double lhs, double rhs, double tolerance);
/// |lhs - rhs| <= rel_tolerance * max(|lhs|, |rhs|, floor)
Check check_close(std::string name, double lhs, double rhs, double rel_tolerance, double floor = 0.0);

bool all_pass(const std::vector<Check>& checks) noexcept;

}  // namespace seqspace
