#include "santa/oracles/verify.hpp"

#include <algorithm>

namespace santa::oracles {

VerifyReport verify_assignment(const alloc::Instance& inst, const alloc::Assignment& assignment) {
  VerifyReport report;
  report.child_values.assign(inst.num_children, Rational(0));
  std::vector<bool> used(inst.num_gifts(), false);
  for (const auto& a : assignment) {
    const std::string where = "gift " + std::to_string(a.gift) + " -> child " + std::to_string(a.child);
    if (a.gift >= inst.num_gifts()) {
      report.error = where + ": gift id out of range";
    } else if (a.child >= inst.num_children) {
      report.error = where + ": child id out of range";
    } else if (used[a.gift]) {
      report.error = where + ": gift assigned more than once";
    } else if (!inst.has_edge(a.child, a.gift)) {
      report.error = where + ": not a desire edge";
    }
    if (!report.error.empty()) break;
    used[a.gift] = true;
    report.child_values[a.child] += inst.values[a.gift];
  }
  report.valid = report.error.empty();
  report.min_value = report.child_values.empty()
                         ? Rational(0)
                         : *std::min_element(report.child_values.begin(), report.child_values.end());
  return report;
}

}  // namespace santa::oracles
