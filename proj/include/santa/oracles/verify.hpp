#pragma once

#include <string>
#include <vector>

#include "santa/alloc/instance.hpp"

namespace santa::oracles {

struct VerifyReport {
  bool valid = false;
  std::string error;               // first violation when invalid
  Rational min_value;              // over all children, recomputed exactly
  std::vector<Rational> child_values;
};

// Checks gift and child ids, that no gift is assigned twice, and that every
// pair is a desire edge; recomputes per-child sums.
VerifyReport verify_assignment(const alloc::Instance& inst, const alloc::Assignment& assignment);

}  // namespace santa::oracles
