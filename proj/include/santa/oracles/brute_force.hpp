#pragma once

#include <cstdint>

#include "santa/alloc/instance.hpp"

namespace santa::oracles {

struct BruteForceLimits {
  std::size_t max_gifts = 16;
  std::size_t max_children = 12;
  std::uint64_t node_budget = 200'000'000;
};

struct BruteForceResult {
  Rational value;            // optimal minimum child value
  alloc::Assignment witness; // attains value, sorted by gift
  std::uint64_t nodes = 0;   // search nodes visited
};

// Exact max-min value over all assignments of gifts to desiring children,
// gifts possibly unassigned. Repeated decision searches "some assignment
// beats the incumbent" run branch and bound over gifts in descending value
// order with memoized failed states. Accepts instances with at most
// max_gifts gifts or at most max_children children; throws
// std::invalid_argument beyond both caps and std::runtime_error when the
// node budget runs out.
BruteForceResult brute_force_opt(const alloc::Instance& inst, const BruteForceLimits& limits = {});

// Plain enumeration of all (|C| + 1)^|G| assignments; for cross-checks on
// tiny instances.
Rational naive_opt(const alloc::Instance& inst);

}  // namespace santa::oracles
