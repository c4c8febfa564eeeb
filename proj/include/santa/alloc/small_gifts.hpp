#pragma once

#include <cstdint>
#include <vector>

#include "santa/alloc/instance.hpp"
#include "santa/congest/round_stats.hpp"

namespace santa::alloc {

inline constexpr std::int64_t kUnassigned = -1;

struct SmallRounding {
  std::vector<std::int64_t> owner;  // per gift: child id or kUnassigned; big gifts stay unassigned
  std::vector<Rational> value_weight;  // per desire edge after cycle rounding, in [0, v]
  std::size_t forest_gifts = 0;        // gifts still fractional after cycle rounding
  std::size_t iterations = 0;
  congest::StatsLog stats;
};

// Rounds z on the small-gift edges. Cycle rounding in rational mode runs on
// value weights z_cs * v_s with caps v_s, leaving a forest of fractional
// edges; each such tree is rooted at its lowest-id child and every
// fractional gift goes to its parent child. A child loses at most the edge
// to its own parent gift, so it keeps value at least sum_s v_s z_cs - max v_s.
// Requires sum_c z_cs <= 1 for every small gift.
SmallRounding round_small_gifts(const Instance& inst, const std::vector<bool>& big, const std::vector<Rational>& z,
                                std::uint64_t seed, std::int64_t virtual_round_cost = 0);

}  // namespace santa::alloc
