#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "santa/congest/network.hpp"

namespace santa::congest {

enum class ContractMode {
  kAllPaths,      // every maximal path of degree-2 vertices
  kOddPathsOnly,  // only paths with an odd number of edges; keeps bipartiteness
};

struct VirtualEdge {
  NodeId u = 0;
  NodeId v = 0;
  bool contracted = false;
  // Base vertices from u to v inclusive; size() == base_edges.size() + 1.
  std::vector<NodeId> path;
  // Indices into the input edge list, in path order.
  std::vector<std::size_t> base_edges;

  int parity() const { return static_cast<int>(base_edges.size() % 2); }
};

struct VirtualGraph {
  std::vector<NodeId> nodes;  // ascending base ids
  std::vector<VirtualEdge> edges;
  std::vector<NodeId> shortcuts;

  // Input edge indices covered by all virtual edges, ascending.
  std::vector<std::size_t> expand() const;
};

// Contracts maximal paths whose interior vertices have degree two in the
// subgraph. A component that is a bare cycle is split at its two lowest-id
// vertices, and a path that closes on its own start gains its lowest-id
// interior vertex as an extra endpoint, so no virtual self-loop arises.
// The subgraph must be simple; the result may have parallel virtual edges.
VirtualGraph compress_virtual_graph(std::size_t num_nodes, std::span<const Edge> subgraph,
                                    ContractMode mode = ContractMode::kAllPaths);

// Same, checking that every subgraph edge is a network edge.
VirtualGraph compress_virtual_graph(const Network& net, std::span<const Edge> subgraph,
                                    ContractMode mode = ContractMode::kAllPaths);

// Base rounds charged for one round on a virtual graph: ceil(sqrt n) + D
// unless overridden (> 0).
std::int64_t virtual_round_cost(const Network& net, std::int64_t override_cost = 0);

struct RootedForest {
  std::vector<NodeId> parent;  // kNoNode at roots
  std::vector<NodeId> roots;   // ascending
  std::int64_t iterations = 0; // rake/compress iterations until every tree vanished
};

// Roots every tree of the forest by iterated rake and compress followed by
// reverse unrolling. Vertices outside the forest are singleton roots. At most
// one pinned vertex per tree; a pinned vertex becomes its tree's root.
// Throws std::invalid_argument if the edge set has a cycle. Charges
// 2 * iterations virtual rounds to the network.
RootedForest root_forest(Network& net, std::span<const Edge> forest,
                         std::span<const NodeId> pinned = {}, std::int64_t round_cost = 0);

// Network-free variant used by centralized stages.
RootedForest root_forest(std::size_t num_nodes, std::span<const Edge> forest,
                         std::span<const NodeId> pinned = {});

}  // namespace santa::congest
