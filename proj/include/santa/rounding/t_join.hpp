#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "santa/congest/network.hpp"

namespace santa::rounding {

using congest::Edge;
using congest::NodeId;

struct TJoin {
  std::vector<std::size_t> edges;  // indices into the input edge list, ascending
  std::int64_t height = 0;         // largest BFS tree height over components
};

// Acyclic T-join inside BFS trees: in each component the tree is rooted at
// the lowest id and grown in ascending (neighbor, edge) order; the edge from
// u to its parent is taken iff the subtree of u holds an odd number of T
// vertices. Parallel edges are allowed. Throws std::invalid_argument when T
// repeats a vertex or some component holds an odd number of T vertices.
TJoin t_join(std::size_t num_nodes, std::span<const Edge> edges, std::span<const NodeId> terminals);

}  // namespace santa::rounding
