#include "santa/rounding/ldd.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "santa/common/numbers.hpp"

namespace santa::rounding {
namespace {

using Adjacency = std::vector<std::vector<std::pair<NodeId, std::size_t>>>;

// Hop eccentricity of s, or limit + 1 once it exceeds limit.
std::int64_t eccentricity(const Adjacency& adj, NodeId s, std::int64_t limit, std::vector<std::int64_t>& dist,
                          std::vector<NodeId>& touched) {
  std::int64_t ecc = 0;
  dist[s] = 0;
  touched.assign(1, s);
  for (std::size_t k = 0; k < touched.size() && ecc <= limit; ++k) {
    const NodeId u = touched[k];
    for (const auto& [v, e] : adj[u]) {
      if (dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      ecc = std::max(ecc, dist[v]);
      touched.push_back(v);
    }
  }
  for (NodeId v : touched) dist[v] = -1;
  return std::min(ecc, limit + 1);
}

// Assigns each vertex with grow[v] set to a center by shifted arrival times.
void grow(const Adjacency& adj, const std::vector<bool>& active, Rng& rng, double beta,
          std::vector<NodeId>& center, std::vector<std::int64_t>& hops) {
  const std::size_t n = adj.size();
  std::vector<double> shift(n, 0);
  double top = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (!active[v]) continue;
    shift[v] = rng.exponential(beta);
    top = std::max(top, shift[v]);
  }
  // Key (arrival, center, hops, vertex); a vertex settles on the smallest key.
  using Key = std::tuple<double, NodeId, std::int64_t, NodeId>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (NodeId v = 0; v < n; ++v) {
    if (active[v]) heap.emplace(top - shift[v], v, 0, v);
  }
  while (!heap.empty()) {
    auto [t, c, h, v] = heap.top();
    heap.pop();
    if (center[v] != congest::kNoNode) continue;
    center[v] = c;
    hops[v] = h;
    for (const auto& [w, e] : adj[v]) {
      if (center[w] == congest::kNoNode) heap.emplace(t + 1, c, h + 1, w);
    }
  }
}

LddClustering assemble(std::span<const Edge> edges, const std::vector<NodeId>& center,
                       const std::vector<std::int64_t>& hops) {
  const std::size_t n = center.size();
  LddClustering out;
  out.cluster_of.assign(n, kNoCluster);
  std::vector<std::int64_t> index_of(n, kNoCluster);
  for (NodeId v = 0; v < n; ++v) {
    if (center[v] == congest::kNoNode) continue;
    const NodeId c = center[v];
    if (index_of[c] == kNoCluster) {
      index_of[c] = static_cast<std::int64_t>(out.centers.size());
      out.centers.push_back(c);
      out.radius.push_back(0);
    }
    const auto k = static_cast<std::size_t>(index_of[c]);
    out.cluster_of[v] = index_of[c];
    out.radius[k] = std::max(out.radius[k], hops[v]);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (out.cluster_of[edges[i].u] != out.cluster_of[edges[i].v]) out.inter_cluster_edges.push_back(i);
  }
  return out;
}

}  // namespace

LddClustering ldd(std::size_t num_nodes, std::span<const Edge> edges, std::uint64_t seed,
                  const LddConfig& config) {
  Adjacency adj(num_nodes);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].u].emplace_back(edges[i].v, i);
    adj[edges[i].v].emplace_back(edges[i].u, i);
  }

  // Small-diameter components are fixed as single clusters centered at their lowest id.
  std::vector<NodeId> fixed_center(num_nodes, congest::kNoNode);
  std::vector<std::int64_t> fixed_hops(num_nodes, 0);
  std::vector<bool> active(num_nodes, false);
  std::vector<std::int64_t> dist(num_nodes, -1);
  std::vector<NodeId> component, touched;
  std::vector<bool> seen(num_nodes, false);
  for (NodeId s = 0; s < num_nodes; ++s) {
    if (seen[s] || adj[s].empty()) continue;
    component.assign(1, s);
    seen[s] = true;
    for (std::size_t k = 0; k < component.size(); ++k) {
      for (const auto& [v, e] : adj[component[k]]) {
        if (!seen[v]) {
          seen[v] = true;
          component.push_back(v);
        }
      }
    }
    bool small = true;
    for (NodeId v : component) {
      if (eccentricity(adj, v, config.whole_component_diameter, dist, touched) > config.whole_component_diameter) {
        small = false;
        break;
      }
    }
    if (small) {
      // BFS from s gives the hop radius from the center.
      dist[s] = 0;
      touched.assign(1, s);
      for (std::size_t k = 0; k < touched.size(); ++k) {
        for (const auto& [v, e] : adj[touched[k]]) {
          if (dist[v] < 0) {
            dist[v] = dist[touched[k]] + 1;
            touched.push_back(v);
          }
        }
      }
      for (NodeId v : touched) {
        fixed_center[v] = s;
        fixed_hops[v] = dist[v];
        dist[v] = -1;
      }
    } else {
      for (NodeId v : component) active[v] = true;
    }
  }

  LddClustering best;
  bool have = false;
  bool best_fits = false;
  const bool any_active = std::find(active.begin(), active.end(), true) != active.end();
  const int attempts = any_active ? std::max(1, config.max_attempts) : 1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    std::vector<NodeId> center = fixed_center;
    std::vector<std::int64_t> hops = fixed_hops;
    if (any_active) {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
      grow(adj, active, rng, config.beta, center, hops);
    }
    LddClustering c = assemble(edges, center, hops);
    const std::int64_t widest = c.radius.empty() ? 0 : *std::max_element(c.radius.begin(), c.radius.end());
    const bool fits = config.max_diameter <= 0 || 2 * widest <= config.max_diameter;
    const bool better = !have || (fits && !best_fits) ||
                        (fits == best_fits && c.inter_cluster_edges.size() < best.inter_cluster_edges.size());
    if (better) {
      best = std::move(c);
      best_fits = fits;
      have = true;
    }
    best.attempts = attempt;
    if (best_fits && best.cut_fraction(edges.size()) <= 2 * config.beta) break;
  }
  return best;
}

}  // namespace santa::rounding
