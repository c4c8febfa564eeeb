#pragma once

#include "santa/common/numbers.hpp"
#include "santa/lp/mixed_lp.hpp"

namespace fixtures {

// Random normalized mixed LP; every variable appears in some row.
inline santa::lp::MixedLP random_lp(std::uint64_t seed, std::size_t max_rows = 12,
                                    std::size_t max_vars = 10) {
  santa::Rng rng(seed);
  santa::lp::MixedLP lp;
  lp.num_vars = 1 + rng.below(max_vars);
  const std::size_t np = 1 + rng.below(max_rows);
  const std::size_t nc = 1 + rng.below(max_rows);
  const double density = 0.2 + 0.6 * rng.unit();
  auto fill = [&](std::vector<santa::lp::Row>& rows, std::size_t count) {
    rows.assign(count, {});
    for (auto& row : rows) {
      for (std::size_t i = 0; i < lp.num_vars; ++i) {
        if (rng.unit() < density) row.push_back({i, 0.1 + 2 * rng.unit()});
      }
      if (row.empty()) row.push_back({rng.below(lp.num_vars), 0.1 + 2 * rng.unit()});
    }
  };
  fill(lp.packing, np);
  fill(lp.covering, nc);
  std::vector<bool> used(lp.num_vars, false);
  for (const auto* rows : {&lp.packing, &lp.covering}) {
    for (const auto& row : *rows) {
      for (const auto& t : row) used[t.var] = true;
    }
  }
  for (std::size_t i = 0; i < lp.num_vars; ++i) {
    if (!used[i]) lp.packing[rng.below(np)].push_back({i, 0.1 + 2 * rng.unit()});
  }
  lp.canonicalize();
  return lp;
}

// Fractional perfect matching on a path with the given number of edges: one
// variable per edge, one packing and one covering row per vertex.
inline santa::lp::MixedLP matching_path(std::size_t edges) {
  santa::lp::MixedLP lp;
  lp.num_vars = edges;
  for (std::size_t v = 0; v <= edges; ++v) {
    santa::lp::Row row;
    if (v > 0) row.push_back({v - 1, 1.0});
    if (v < edges) row.push_back({v, 1.0});
    lp.packing.push_back(row);
    lp.covering.push_back(row);
  }
  return lp;
}

}  // namespace fixtures
