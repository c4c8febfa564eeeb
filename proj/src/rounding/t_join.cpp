#include "santa/rounding/t_join.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace santa::rounding {

TJoin t_join(std::size_t num_nodes, std::span<const Edge> edges, std::span<const NodeId> terminals) {
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj(num_nodes);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u >= num_nodes || e.v >= num_nodes || e.u == e.v) throw std::invalid_argument("t_join: bad edge");
    adj[e.u].emplace_back(e.v, i);
    adj[e.v].emplace_back(e.u, i);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<int> odd(num_nodes, 0);
  for (NodeId t : terminals) {
    if (t >= num_nodes) throw std::invalid_argument("t_join: terminal out of range");
    if (odd[t]) throw std::invalid_argument("t_join: repeated terminal");
    odd[t] = 1;
  }

  TJoin out;
  std::vector<std::int64_t> depth(num_nodes, -1);
  std::vector<std::size_t> parent_edge(num_nodes, 0);
  std::vector<NodeId> parent(num_nodes, congest::kNoNode);
  for (NodeId s = 0; s < num_nodes; ++s) {
    if (depth[s] >= 0) continue;
    std::vector<NodeId> order{s};
    depth[s] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const NodeId u = order[k];
      for (const auto& [w, e] : adj[u]) {
        if (depth[w] >= 0) continue;
        depth[w] = depth[u] + 1;
        parent[w] = u;
        parent_edge[w] = e;
        order.push_back(w);
      }
    }
    out.height = std::max(out.height, depth[order.back()]);
    // Reverse BFS order visits every child before its parent.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId u = *it;
      if (u == s) {
        if (odd[u]) throw std::invalid_argument("t_join: odd number of terminals in a component");
        continue;
      }
      if (odd[u]) {
        out.edges.push_back(parent_edge[u]);
        odd[parent[u]] ^= 1;
      }
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace santa::rounding
