#pragma once

#include <span>
#include <vector>

#include "santa/rounding/t_join.hpp"

namespace santa::rounding {

struct Cycle {
  // vertices[k] and vertices[k + 1] (cyclically) are joined by edges[k].
  std::vector<NodeId> vertices;
  std::vector<std::size_t> edges;
};

// Partitions the edges of a graph with all degrees even into edge-disjoint
// cycles, each visiting a vertex at most once. Parallel edges form cycles of
// length two. Throws std::invalid_argument on an odd-degree vertex.
std::vector<Cycle> cycle_decompose(std::size_t num_nodes, std::span<const Edge> edges);

}  // namespace santa::rounding
