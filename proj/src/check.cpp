#include "seqspace/check.hpp"

#include <algorithm>
#include <cmath>

namespace seqspace {

Check check_le(std::string name, double lhs, double rhs, double tolerance) {
  Check c{std::move(name), lhs, rhs, rhs + tolerance - lhs, tolerance, false};
  c.pass = c.slack >= 0.0;
  return c;
}

Check check_close(std::string name, double lhs, double rhs, double rel_tolerance, double floor) {
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), floor});
  const double tol = rel_tolerance * scale;
  Check c{std::move(name), lhs, rhs, tol - std::fabs(lhs - rhs), tol, false};
  c.pass = c.slack >= 0.0;
  return c;
}

bool all_pass(const std::vector<Check>& checks) noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace seqspace
