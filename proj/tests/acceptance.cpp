// Runs the full acceptance battery and prints one PASS/FAIL line per
// criterion. The process exits 0 when every failure is a known one: a
// factorization case whose matrix falls outside the construction's
// hypotheses (flagged by the battery itself). Any other failure exits 1.
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "seqspace/verify/battery.hpp"

namespace {

bool only_outside_hypotheses(const seqspace::verify::CriterionResult& r) {
  if (r.id != 5) return false;
  const std::string_view detail = r.detail;
  bool any = false;
  std::size_t start = 0;
  while (start < detail.size()) {
    std::size_t end = detail.find("; ", start);
    if (end == std::string_view::npos) end = detail.size();
    const std::string_view item = detail.substr(start, end - start);
    if (item.find(" FAIL ") != std::string_view::npos) {
      if (item.find("[outside hypotheses:") == std::string_view::npos) return false;
      any = true;
    }
    start = end + 2;
  }
  return any;
}

}  // namespace

int main() {
  seqspace::verify::BatteryConfig config;
  const auto results = seqspace::verify::run_battery(config);
  std::fputs(seqspace::verify::format_report(results).c_str(), stdout);

  int unexpected = 0;
  int known = 0;
  for (const auto& r : results) {
    if (r.pass) continue;
    if (only_outside_hypotheses(r)) {
      ++known;
    } else {
      ++unexpected;
    }
  }
  std::printf("%zu criteria, %d known failure(s) outside hypotheses, %d unexpected failure(s)\n",
              results.size(), known, unexpected);
  return unexpected == 0 && results.size() == 13 ? 0 : 1;
}
