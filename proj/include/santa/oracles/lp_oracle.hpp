#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "santa/common/numbers.hpp"
#include "santa/lp/mixed_lp.hpp"

namespace santa::oracles {

// Dense size cap per side for the exact procedures below.
inline constexpr std::size_t kLpOracleMaxDim = 64;

enum class SimplexStatus { kOptimal, kInfeasible, kUnbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::kInfeasible;
  std::vector<Rational> x;
  Rational objective;
};

// min c.x subject to A x = b, x >= 0 with b >= 0, by two-phase simplex
// with Bland's rule in exact arithmetic.
SimplexResult simplex_standard(const std::vector<std::vector<Rational>>& A,
                               const std::vector<Rational>& b, const std::vector<Rational>& c);

struct LpOracleResult {
  bool feasible = false;
  std::vector<Rational> x;  // witness when feasible
};

// Exact verdict for { C x >= 1, P x <= slack, x >= 0 } on a normalized LP.
// Throws std::invalid_argument beyond kLpOracleMaxDim rows per side or
// variables.
LpOracleResult lp_feasibility_oracle(const lp::MixedLP& lp, const Rational& slack);

// Exact lambda* = min { t : P x <= t, C x >= 1, x >= 0 }; empty when some
// covering row has empty support.
std::optional<Rational> min_packing_ratio(const lp::MixedLP& lp);

}  // namespace santa::oracles
