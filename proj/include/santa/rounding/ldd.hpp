#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "santa/rounding/t_join.hpp"

namespace santa::rounding {

inline constexpr std::int64_t kNoCluster = -1;

struct LddClustering {
  std::vector<std::int64_t> cluster_of;  // kNoCluster for vertices without edges
  std::vector<NodeId> centers;           // per cluster
  std::vector<std::int64_t> radius;      // hop radius from the center inside the cluster
  std::vector<std::size_t> inter_cluster_edges;  // ascending edge indices
  int attempts = 0;

  double cut_fraction(std::size_t num_edges) const {
    return num_edges == 0 ? 0.0 : static_cast<double>(inter_cluster_edges.size()) / static_cast<double>(num_edges);
  }
};

struct LddConfig {
  double beta = 0.1;
  int max_attempts = 16;
  // A draw with a cluster of hop diameter above this is rejected; 0 disables.
  std::int64_t max_diameter = 0;
  // Components of at most this diameter become one cluster without a draw.
  std::int64_t whole_component_diameter = 2;
};

// Exponentially shifted ball growing: every vertex draws a shift
// d_v ~ Exp(beta) and each vertex joins the center minimizing
// dist(u, v) - d_v, ties to the lower center id. Clusters are connected.
// A clustering cutting more than 2 beta of the edges is redrawn with a fresh
// stream; after max_attempts the clustering with the fewest cut edges is
// returned, preferring draws within max_diameter.
LddClustering ldd(std::size_t num_nodes, std::span<const Edge> edges, std::uint64_t seed,
                  const LddConfig& config = {});

}  // namespace santa::rounding
