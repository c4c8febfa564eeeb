#include "santa/congest/virtual_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace santa::congest {
namespace {

struct Incidence {
  NodeId other;
  std::size_t edge;
};

std::int64_t ceil_sqrt(std::size_t n) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s < static_cast<std::int64_t>(n)) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= static_cast<std::int64_t>(n)) --s;
  return std::max<std::int64_t>(s, 1);
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::size_t> VirtualGraph::expand() const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) out.insert(out.end(), e.base_edges.begin(), e.base_edges.end());
  std::sort(out.begin(), out.end());
  return out;
}

VirtualGraph compress_virtual_graph(std::size_t num_nodes, std::span<const Edge> subgraph,
                                    ContractMode mode) {
  std::vector<std::vector<Incidence>> inc(num_nodes);
  for (std::size_t i = 0; i < subgraph.size(); ++i) {
    const Edge& e = subgraph[i];
    if (e.u >= num_nodes || e.v >= num_nodes || e.u == e.v) {
      throw std::invalid_argument("compress_virtual_graph: bad edge");
    }
    inc[e.u].push_back({e.v, i});
    inc[e.v].push_back({e.u, i});
  }

  std::vector<bool> anchor(num_nodes, false);
  for (NodeId v = 0; v < num_nodes; ++v) anchor[v] = !inc[v].empty() && inc[v].size() != 2;

  // Bare cycles: components where every vertex has degree two.
  std::vector<bool> seen(num_nodes, false);
  for (NodeId s = 0; s < num_nodes; ++s) {
    if (seen[s] || inc[s].empty()) continue;
    std::vector<NodeId> comp{s};
    seen[s] = true;
    bool all_two = true;
    for (std::size_t k = 0; k < comp.size(); ++k) {
      NodeId v = comp[k];
      all_two = all_two && inc[v].size() == 2;
      for (const auto& [w, e] : inc[v]) {
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
      }
    }
    if (all_two) {
      std::sort(comp.begin(), comp.end());
      anchor[comp[0]] = true;
      anchor[comp[1]] = true;
    }
  }

  // Walk every path between anchors.
  std::vector<bool> used(subgraph.size(), false);
  std::vector<std::pair<std::vector<NodeId>, std::vector<std::size_t>>> paths;
  for (NodeId s = 0; s < num_nodes; ++s) {
    if (!anchor[s]) continue;
    for (const auto& first : inc[s]) {
      if (used[first.edge]) continue;
      std::vector<NodeId> path{s};
      std::vector<std::size_t> base;
      NodeId at = s;
      Incidence step = first;
      while (true) {
        used[step.edge] = true;
        base.push_back(step.edge);
        at = step.other;
        path.push_back(at);
        if (anchor[at]) break;
        const auto& two = inc[at];
        step = used[two[0].edge] ? two[1] : two[0];
      }
      if (path.front() == path.back()) {
        auto interior_min = std::min_element(path.begin() + 1, path.end() - 1);
        const std::size_t cut = static_cast<std::size_t>(interior_min - path.begin());
        anchor[*interior_min] = true;
        paths.emplace_back(std::vector<NodeId>(path.begin(), path.begin() + cut + 1),
                           std::vector<std::size_t>(base.begin(), base.begin() + cut));
        paths.emplace_back(std::vector<NodeId>(path.begin() + cut, path.end()),
                           std::vector<std::size_t>(base.begin() + cut, base.end()));
      } else {
        paths.emplace_back(std::move(path), std::move(base));
      }
    }
  }

  VirtualGraph vg;
  const std::int64_t stride = ceil_sqrt(num_nodes);
  std::vector<bool> is_node(num_nodes, false);
  for (NodeId v = 0; v < num_nodes; ++v) is_node[v] = anchor[v];
  for (auto& [path, base] : paths) {
    if (path.front() > path.back()) {
      std::reverse(path.begin(), path.end());
      std::reverse(base.begin(), base.end());
    }
    const bool contract =
        base.size() > 1 && (mode == ContractMode::kAllPaths || base.size() % 2 == 1);
    if (contract) {
      VirtualEdge ve;
      ve.u = path.front();
      ve.v = path.back();
      ve.contracted = true;
      for (std::size_t k = static_cast<std::size_t>(stride); k + 1 < path.size();
           k += static_cast<std::size_t>(stride)) {
        vg.shortcuts.push_back(path[k]);
      }
      ve.path = std::move(path);
      ve.base_edges = std::move(base);
      vg.edges.push_back(std::move(ve));
      continue;
    }
    for (std::size_t k = 0; k < base.size(); ++k) {
      VirtualEdge ve;
      ve.u = std::min(path[k], path[k + 1]);
      ve.v = std::max(path[k], path[k + 1]);
      ve.path = {ve.u, ve.v};
      ve.base_edges = {base[k]};
      is_node[path[k]] = is_node[path[k + 1]] = true;
      vg.edges.push_back(std::move(ve));
    }
  }
  for (NodeId v = 0; v < num_nodes; ++v) {
    if (is_node[v]) vg.nodes.push_back(v);
  }
  std::sort(vg.shortcuts.begin(), vg.shortcuts.end());
  return vg;
}

VirtualGraph compress_virtual_graph(const Network& net, std::span<const Edge> subgraph,
                                    ContractMode mode) {
  for (const Edge& e : subgraph) {
    if (e.u >= net.size() || e.v >= net.size() || !net.adjacent(e.u, e.v)) {
      throw std::invalid_argument("compress_virtual_graph: edge not in network");
    }
  }
  return compress_virtual_graph(net.size(), subgraph, mode);
}

std::int64_t virtual_round_cost(const Network& net, std::int64_t override_cost) {
  if (override_cost > 0) return override_cost;
  return ceil_sqrt(net.size()) + net.diameter();
}

RootedForest root_forest(std::size_t num_nodes, std::span<const Edge> forest,
                         std::span<const NodeId> pinned) {
  UnionFind uf(num_nodes);
  for (const Edge& e : forest) {
    if (e.u >= num_nodes || e.v >= num_nodes) throw std::invalid_argument("root_forest: bad edge");
    if (!uf.unite(e.u, e.v)) throw std::invalid_argument("root_forest: edge set contains a cycle");
  }
  std::vector<bool> is_pinned(num_nodes, false);
  std::map<std::size_t, NodeId> pin_of;
  for (NodeId p : pinned) {
    if (p >= num_nodes) throw std::invalid_argument("root_forest: pinned vertex out of range");
    if (!pin_of.emplace(uf.find(p), p).second) {
      throw std::invalid_argument("root_forest: two pinned vertices in one tree");
    }
    is_pinned[p] = true;
  }

  // Live adjacency: neighbor -> base path from this vertex to the neighbor.
  std::vector<std::map<NodeId, std::vector<NodeId>>> adj(num_nodes);
  for (const Edge& e : forest) {
    adj[e.u][e.v] = {e.u, e.v};
    adj[e.v][e.u] = {e.v, e.u};
  }

  RootedForest out;
  out.parent.assign(num_nodes, kNoNode);
  std::vector<bool> alive(num_nodes, true);
  std::size_t remaining = 0;
  for (NodeId v = 0; v < num_nodes; ++v) {
    if (adj[v].empty()) {
      alive[v] = false;
      out.roots.push_back(v);
    } else {
      ++remaining;
    }
  }

  while (remaining > 0) {
    ++out.iterations;
    // Rake.
    std::vector<NodeId> raked;
    for (NodeId v = 0; v < num_nodes; ++v) {
      if (!alive[v] || is_pinned[v] || adj[v].size() > 1) continue;
      if (adj[v].empty()) {
        raked.push_back(v);
        continue;
      }
      NodeId u = adj[v].begin()->first;
      // Two unpinned leaves facing each other: only the higher id goes.
      if (adj[u].size() == 1 && !is_pinned[u] && u > v) continue;
      raked.push_back(v);
    }
    for (NodeId v : raked) {
      alive[v] = false;
      --remaining;
      if (adj[v].empty()) {
        out.roots.push_back(v);
        continue;
      }
      auto [u, path] = *adj[v].begin();
      for (std::size_t k = 0; k + 1 < path.size(); ++k) out.parent[path[k]] = path[k + 1];
      adj[u].erase(v);
      adj[v].clear();
    }
    for (NodeId v = 0; v < num_nodes; ++v) {
      if (alive[v] && is_pinned[v] && adj[v].empty()) {
        alive[v] = false;
        --remaining;
        out.roots.push_back(v);
      }
    }
    // Compress maximal chains of unpinned degree-2 vertices.
    auto chain_vertex = [&](NodeId v) { return alive[v] && !is_pinned[v] && adj[v].size() == 2; };
    std::vector<bool> done(num_nodes, false);
    for (NodeId s = 0; s < num_nodes; ++s) {
      if (!chain_vertex(s) || done[s]) continue;
      // Walk to one end of the chain.
      NodeId prev = adj[s].begin()->first;
      NodeId at = s;
      while (chain_vertex(prev) && prev != s) {
        NodeId next = adj[prev].begin()->first == at ? std::next(adj[prev].begin())->first
                                                     : adj[prev].begin()->first;
        at = prev;
        prev = next;
      }
      // prev is an end, `at` the first chain vertex after it; walk forward.
      NodeId x = prev;
      std::vector<NodeId> path = adj[x].at(at);
      std::vector<NodeId> chain;
      NodeId from = x;
      NodeId cur = at;
      while (chain_vertex(cur)) {
        done[cur] = true;
        chain.push_back(cur);
        NodeId next = adj[cur].begin()->first == from ? std::next(adj[cur].begin())->first
                                                      : adj[cur].begin()->first;
        const auto& seg = adj[cur].at(next);
        path.insert(path.end(), seg.begin() + 1, seg.end());
        from = cur;
        cur = next;
      }
      NodeId y = cur;
      adj[x].erase(chain.front());
      adj[y].erase(chain.back());
      for (NodeId w : chain) {
        alive[w] = false;
        --remaining;
        adj[w].clear();
      }
      std::vector<NodeId> reversed(path.rbegin(), path.rend());
      adj[x][y] = path;
      adj[y][x] = std::move(reversed);
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

RootedForest root_forest(Network& net, std::span<const Edge> forest, std::span<const NodeId> pinned,
                         std::int64_t round_cost) {
  for (const Edge& e : forest) {
    if (e.u >= net.size() || e.v >= net.size() || !net.adjacent(e.u, e.v)) {
      throw std::invalid_argument("root_forest: edge not in network");
    }
  }
  RootedForest out = root_forest(net.size(), forest, pinned);
  RoundStats delta;
  delta.rounds_elapsed = 2 * out.iterations * virtual_round_cost(net, round_cost);
  delta.total_messages = 2 * static_cast<std::int64_t>(forest.size());
  if (!forest.empty()) delta.max_bits_on_any_edge_per_round = 2 * net.id_bits();
  net.charge(delta);
  return out;
}

}  // namespace santa::congest
