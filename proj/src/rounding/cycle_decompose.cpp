#include "santa/rounding/cycle_decompose.hpp"

#include <algorithm>
#include <stdexcept>

namespace santa::rounding {

std::vector<Cycle> cycle_decompose(std::size_t num_nodes, std::span<const Edge> edges) {
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj(num_nodes);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u >= num_nodes || e.v >= num_nodes || e.u == e.v) {
      throw std::invalid_argument("cycle_decompose: bad edge");
    }
    adj[e.u].emplace_back(e.v, i);
    adj[e.v].emplace_back(e.u, i);
  }
  for (NodeId v = 0; v < num_nodes; ++v) {
    if (adj[v].size() % 2 != 0) throw std::invalid_argument("cycle_decompose: odd-degree vertex");
    std::sort(adj[v].begin(), adj[v].end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
  }

  std::vector<bool> used(edges.size(), false);
  std::vector<std::size_t> cursor(num_nodes, 0);
  std::vector<std::ptrdiff_t> position(num_nodes, -1);
  auto next_edge = [&](NodeId v) -> const std::pair<NodeId, std::size_t>* {
    while (cursor[v] < adj[v].size() && used[adj[v][cursor[v]].second]) ++cursor[v];
    return cursor[v] < adj[v].size() ? &adj[v][cursor[v]] : nullptr;
  };

  std::vector<Cycle> cycles;
  for (NodeId s = 0; s < num_nodes; ++s) {
    std::vector<NodeId> path{s};
    std::vector<std::size_t> via;  // via[k] joins path[k] and path[k + 1]
    position[s] = 0;
    while (true) {
      const NodeId at = path.back();
      const auto* step = next_edge(at);
      if (step == nullptr) {
        // Even degrees leave the walk stuck only at its start.
        if (path.size() != 1) throw std::logic_error("cycle_decompose: walk stuck");
        position[at] = -1;
        break;
      }
      used[step->second] = true;
      const NodeId to = step->first;
      via.push_back(step->second);
      if (position[to] >= 0) {
        const auto from = static_cast<std::size_t>(position[to]);
        Cycle c;
        c.vertices.assign(path.begin() + static_cast<std::ptrdiff_t>(from), path.end());
        c.edges.assign(via.begin() + static_cast<std::ptrdiff_t>(from), via.end());
        for (std::size_t k = from + 1; k < path.size(); ++k) position[path[k]] = -1;
        path.resize(from + 1);
        via.resize(from);
        cycles.push_back(std::move(c));
      } else {
        position[to] = static_cast<std::ptrdiff_t>(path.size());
        path.push_back(to);
      }
    }
  }
  return cycles;
}

}  // namespace santa::rounding
