#include "santa/rounding/cycle_rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "santa/congest/virtual_graph.hpp"
#include "santa/rounding/cycle_decompose.hpp"
#include "santa/rounding/t_join.hpp"

namespace santa::rounding {

bool is_integral(double w, double cap, double tolerance) { return std::min(w, cap - w) <= tolerance; }

bool is_integral(const Rational& w, const Rational& cap, double) { return w == 0 || w == cap; }

namespace {

// A base edge with the sign it moves by when its cycle steps by +delta.
struct Signed {
  std::size_t edge;
  int sign;
};

template <class W>
W slack(const W& w, const W& cap, int sign) {
  return sign > 0 ? W(cap - w) : w;
}

// Picks the orientation, applies the step, and pins the binding edges
// exactly to their bound.
template <class W>
W apply_step(std::span<const Signed> moves, std::vector<W>& w, std::span<const W> caps,
             CycleOrientation orientation) {
  std::size_t lowest = 0;
  for (std::size_t k = 1; k < moves.size(); ++k) {
    if (moves[k].edge < moves[lowest].edge) lowest = k;
  }
  auto step_for = [&](int dir) {
    W best = slack(w[moves[0].edge], caps[moves[0].edge], dir * moves[0].sign);
    for (const Signed& m : moves) best = std::min(best, slack(w[m.edge], caps[m.edge], dir * m.sign));
    return best;
  };
  int dir = 1;
  switch (orientation) {
    case CycleOrientation::kIncreaseFirst: dir = moves[0].sign; break;
    case CycleOrientation::kDecreaseFirst: dir = -moves[0].sign; break;
    case CycleOrientation::kLargerStep: {
      const W up = step_for(1);
      const W down = step_for(-1);
      if (up > down) dir = 1;
      else if (down > up) dir = -1;
      else dir = moves[lowest].sign;
      break;
    }
  }
  const W delta = step_for(dir);
  for (const Signed& m : moves) {
    const int s = dir * m.sign;
    const W room = slack(w[m.edge], caps[m.edge], s);
    if (room == delta) {
      w[m.edge] = s > 0 ? caps[m.edge] : W(0);
    } else if (s > 0) {
      w[m.edge] += delta;
    } else {
      w[m.edge] -= delta;
    }
  }
  return delta;
}

template <class W>
void check_weights(std::size_t num_nodes, std::span<const Edge> edges, std::span<const W> w, std::span<const W> caps) {
  if (w.size() != edges.size() || caps.size() != edges.size()) {
    throw std::invalid_argument("round_cycles: weight and cap counts must match the edge count");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].u >= num_nodes || edges[i].v >= num_nodes || edges[i].u == edges[i].v) {
      throw std::invalid_argument("round_cycles: bad edge");
    }
    if (!(caps[i] > 0)) throw std::invalid_argument("round_cycles: cap must be positive");
    if (!(w[i] >= 0) || !(w[i] <= caps[i])) throw std::invalid_argument("round_cycles: weight outside [0, cap]");
  }
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

std::vector<int> two_coloring(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> color(n, -1);
  for (NodeId s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::vector<NodeId> stack{s};
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adj[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          stack.push_back(v);
        } else if (color[v] == color[u]) {
          throw std::invalid_argument("round_cycles: graph has an odd cycle");
        }
      }
    }
  }
  return color;
}

std::int64_t largest_component_diameter(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::int64_t diameter = 0;
  std::vector<std::int64_t> dist(n);
  for (NodeId s = 0; s < n; ++s) {
    if (adj[s].empty()) continue;
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::vector<NodeId> order{s};
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (NodeId v : adj[order[k]]) {
        if (dist[v] < 0) {
          dist[v] = dist[order[k]] + 1;
          order.push_back(v);
        }
      }
    }
    diameter = std::max(diameter, dist[order.back()]);
  }
  return diameter;
}

// Iterated removal of vertices of degree at most one. Returns the surviving
// edges (ascending) and the number of peeling rounds.
std::pair<std::vector<std::size_t>, std::int64_t> rake(std::size_t n, std::span<const Edge> edges,
                                                      const std::vector<std::size_t>& active) {
  std::vector<std::vector<std::size_t>> inc(n);
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i : active) {
    inc[edges[i].u].push_back(i);
    inc[edges[i].v].push_back(i);
    ++degree[edges[i].u];
    ++degree[edges[i].v];
  }
  std::vector<bool> removed(edges.size(), false);
  std::vector<NodeId> layer;
  for (NodeId v = 0; v < n; ++v) {
    if (degree[v] == 1) layer.push_back(v);
  }
  std::int64_t rounds = 0;
  while (!layer.empty()) {
    ++rounds;
    std::vector<NodeId> next;
    for (NodeId v : layer) {
      for (std::size_t i : inc[v]) {
        if (removed[i]) continue;
        removed[i] = true;
        for (NodeId x : {edges[i].u, edges[i].v}) {
          if (--degree[x] == 1) next.push_back(x);
        }
      }
    }
    layer = std::move(next);
  }
  std::vector<std::size_t> core;
  for (std::size_t i : active) {
    if (!removed[i]) core.push_back(i);
  }
  return {core, rounds};
}

congest::RoundStats charge(std::int64_t rounds, std::int64_t messages, std::int64_t bits) {
  congest::RoundStats s;
  s.rounds_elapsed = rounds;
  s.total_messages = messages;
  s.max_bits_on_any_edge_per_round = messages > 0 ? bits : 0;
  return s;
}

struct PassOutcome {
  std::size_t clusters = 0;
  std::size_t cycles = 0;
  double cut_fraction = 0;
  congest::RoundStats ldd, tjoin, cycle_rounds;
};

// One LDD / T-join / cycle pass over the working virtual graph.
template <class W>
PassOutcome rounding_pass(std::size_t n, const congest::VirtualGraph& vg,
                          const std::vector<std::size_t>& core, std::vector<W>& w, std::span<const W> caps,
                          const RoundingConfig& config, std::uint64_t seed, bool use_ldd,
                          std::int64_t vcost, std::int64_t id_bits) {
  PassOutcome out;
  std::vector<Edge> vedges;
  vedges.reserve(vg.edges.size());
  for (const auto& e : vg.edges) vedges.push_back({e.u, e.v});

  LddClustering clustering;
  if (use_ldd) {
    clustering = ldd(n, vedges, seed, config.ldd);
  } else {
    // One cluster per connected component.
    UnionFind uf(n);
    for (const Edge& e : vedges) uf.unite(e.u, e.v);
    clustering.cluster_of.assign(n, kNoCluster);
    std::vector<std::int64_t> index(n, kNoCluster);
    for (NodeId v : vg.nodes) {
      const auto root = uf.find(v);
      if (index[root] == kNoCluster) {
        index[root] = static_cast<std::int64_t>(clustering.centers.size());
        clustering.centers.push_back(static_cast<NodeId>(root));
        clustering.radius.push_back(0);
      }
      clustering.cluster_of[v] = index[root];
    }
  }
  out.clusters = clustering.centers.size();
  out.cut_fraction = clustering.cut_fraction(vedges.size());
  const std::int64_t max_radius =
      clustering.radius.empty() ? 0 : *std::max_element(clustering.radius.begin(), clustering.radius.end());
  out.ldd = charge(vcost * (max_radius + 1), 2 * static_cast<std::int64_t>(vedges.size()), id_bits);

  // Group intra-cluster virtual edges by cluster.
  std::vector<std::vector<std::size_t>> members(out.clusters);
  for (std::size_t i = 0; i < vedges.size(); ++i) {
    const auto cu = clustering.cluster_of[vedges[i].u];
    if (cu != kNoCluster && cu == clustering.cluster_of[vedges[i].v]) {
      members[static_cast<std::size_t>(cu)].push_back(i);
    }
  }

  std::vector<NodeId> local(n, congest::kNoNode);
  std::int64_t max_height = 0;
  std::int64_t longest_cycle = 0;
  std::int64_t cycle_messages = 0;
  std::int64_t tjoin_messages = 0;
  for (const auto& ids : members) {
    if (ids.empty()) continue;
    std::vector<NodeId> verts;
    for (std::size_t i : ids) {
      for (NodeId x : {vedges[i].u, vedges[i].v}) {
        if (local[x] == congest::kNoNode) {
          local[x] = static_cast<NodeId>(verts.size());
          verts.push_back(x);
        }
      }
    }
    std::vector<Edge> cluster_edges;
    std::vector<std::size_t> degree(verts.size(), 0);
    for (std::size_t i : ids) {
      cluster_edges.push_back({local[vedges[i].u], local[vedges[i].v]});
      ++degree[local[vedges[i].u]];
      ++degree[local[vedges[i].v]];
    }
    std::vector<NodeId> terminals;
    for (NodeId x = 0; x < verts.size(); ++x) {
      if (degree[x] % 2 != 0) terminals.push_back(x);
    }
    const TJoin join = t_join(verts.size(), cluster_edges, terminals);
    max_height = std::max(max_height, join.height);
    tjoin_messages += 2 * static_cast<std::int64_t>(verts.size());

    std::vector<bool> in_join(cluster_edges.size(), false);
    for (std::size_t k : join.edges) in_join[k] = true;
    std::vector<Edge> rest;
    std::vector<std::size_t> rest_to_virtual;
    for (std::size_t k = 0; k < cluster_edges.size(); ++k) {
      if (in_join[k]) continue;
      rest.push_back(cluster_edges[k]);
      rest_to_virtual.push_back(ids[k]);
    }
    for (const Cycle& c : cycle_decompose(verts.size(), rest)) {
      if (c.edges.size() % 2 != 0) throw std::logic_error("round_cycles: odd cycle in the working graph");
      std::vector<Signed> moves;
      for (std::size_t t = 0; t < c.edges.size(); ++t) {
        const auto& ve = vg.edges[rest_to_virtual[c.edges[t]]];
        const int outer = t % 2 == 0 ? 1 : -1;
        for (std::size_t k = 0; k < ve.base_edges.size(); ++k) {
          moves.push_back({core[ve.base_edges[k]], k % 2 == 0 ? outer : -outer});
        }
      }
      apply_step<W>(moves, w, caps, CycleOrientation::kLargerStep);
      ++out.cycles;
      longest_cycle = std::max(longest_cycle, static_cast<std::int64_t>(moves.size()));
      cycle_messages += static_cast<std::int64_t>(moves.size());
    }
    for (NodeId x : verts) local[x] = congest::kNoNode;
  }
  out.tjoin = charge(vcost * (2 * max_height + 1), tjoin_messages, id_bits);
  out.cycle_rounds = charge(longest_cycle, cycle_messages, id_bits);
  return out;
}

template <class W>
std::vector<std::size_t> fractional_edges(std::size_t m, const std::vector<W>& w, std::span<const W> caps,
                                          double tolerance) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_integral(w[i], caps[i], tolerance)) out.push_back(i);
  }
  return out;
}

bool is_forest(std::size_t n, std::span<const Edge> edges, const std::vector<std::size_t>& subset) {
  UnionFind uf(n);
  for (std::size_t i : subset) {
    if (!uf.unite(edges[i].u, edges[i].v)) return false;
  }
  return true;
}

}  // namespace

template <class W>
W round_single_cycle(std::span<const Edge> edges, std::span<const std::size_t> cycle, std::vector<W>& w,
                     std::span<const W> caps, CycleOrientation orientation, double tolerance) {
  if (cycle.empty() || cycle.size() % 2 != 0) throw std::invalid_argument("round_single_cycle: cycle length must be even");
  if (w.size() != edges.size() || caps.size() != edges.size()) {
    throw std::invalid_argument("round_single_cycle: weight and cap counts must match the edge count");
  }
  std::set<std::size_t> seen;
  for (std::size_t i : cycle) {
    if (i >= edges.size()) throw std::invalid_argument("round_single_cycle: edge index out of range");
    if (!seen.insert(i).second) throw std::invalid_argument("round_single_cycle: repeated edge");
    if (!(w[i] >= 0) || !(w[i] <= caps[i])) throw std::invalid_argument("round_single_cycle: weight outside [0, cap]");
    if (is_integral(w[i], caps[i], tolerance)) throw std::invalid_argument("round_single_cycle: edge already integral");
  }
  // Walk the sequence from the endpoint of the first edge not shared with the second.
  const Edge& first = edges[cycle[0]];
  const Edge& second = edges[cycle[1]];
  NodeId start = (first.u == second.u || first.u == second.v) ? first.v : first.u;
  NodeId at = start;
  for (std::size_t i : cycle) {
    if (edges[i].u == at) at = edges[i].v;
    else if (edges[i].v == at) at = edges[i].u;
    else throw std::invalid_argument("round_single_cycle: edges do not form a walk");
  }
  if (at != start) throw std::invalid_argument("round_single_cycle: walk is not closed");
  std::vector<Signed> moves;
  for (std::size_t t = 0; t < cycle.size(); ++t) moves.push_back({cycle[t], t % 2 == 0 ? 1 : -1});
  return apply_step<W>(moves, w, caps, orientation);
}

template <class W>
bool fractional_part_is_forest(std::size_t num_nodes, std::span<const Edge> edges, std::span<const W> w,
                               std::span<const W> caps, double tolerance) {
  std::vector<W> copy(w.begin(), w.end());
  return is_forest(num_nodes, edges, fractional_edges(edges.size(), copy, caps, tolerance));
}

template <class W>
RoundingResult<W> round_cycles(std::size_t num_nodes, std::span<const Edge> edges, std::vector<W> w,
                               std::span<const W> caps, const RoundingConfig& config) {
  check_weights<W>(num_nodes, edges, w, caps);
  {
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const Edge& e : edges) {
      if (!pairs.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
        throw std::invalid_argument("round_cycles: parallel edges");
      }
    }
  }
  const std::vector<int> color = two_coloring(num_nodes, edges);
  const std::int64_t id_bits = 2 * static_cast<std::int64_t>(congest::ceil_log2(std::max<std::size_t>(num_nodes, 2))) + 1;

  RoundingResult<W> result;
  result.w = std::move(w);
  std::int64_t vcost = config.virtual_round_cost;
  std::vector<std::size_t> frac = fractional_edges(edges.size(), result.w, caps, config.tolerance);
  for (std::uint64_t iteration = 0; !is_forest(num_nodes, edges, frac); ++iteration) {
    if (vcost <= 0) {
      vcost = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(num_nodes)))) +
              largest_component_diameter(num_nodes, edges);
    }
    IterationReport report;
    report.fractional_before = frac.size();

    auto [core, rake_rounds] = rake(num_nodes, edges, frac);
    result.stats.add("rake", charge(rake_rounds, 2 * static_cast<std::int64_t>(frac.size()), id_bits));
    std::vector<Edge> sub;
    sub.reserve(core.size());
    for (std::size_t i : core) sub.push_back(edges[i]);
    const congest::VirtualGraph vg =
        congest::compress_virtual_graph(num_nodes, sub, congest::ContractMode::kOddPathsOnly);
    std::int64_t longest_path = 0;
    for (const auto& ve : vg.edges) {
      if (color[ve.u] == color[ve.v]) throw std::logic_error("round_cycles: contraction broke bipartiteness");
      longest_path = std::max(longest_path, static_cast<std::int64_t>(ve.base_edges.size()));
    }
    result.stats.add("compress", charge(longest_path, 2 * static_cast<std::int64_t>(core.size()), id_bits));
    report.working_vertices = vg.nodes.size();
    report.working_edges = vg.edges.size();

    const std::uint64_t seed = Rng::derive(config.seed, iteration);
    std::vector<W> before = result.w;
    PassOutcome pass = rounding_pass<W>(num_nodes, vg, core, result.w, caps, config, seed,
                                        config.use_ldd, vcost, id_bits);
    std::vector<std::size_t> after = fractional_edges(edges.size(), result.w, caps, config.tolerance);
    if (after.size() >= frac.size() && config.use_ldd) {
      // Every cycle was cut by the clustering; redo the pass without it.
      result.w = std::move(before);
      result.stats.add("ldd", pass.ldd);
      result.stats.add("t_join", pass.tjoin);
      result.stats.add("cycles", pass.cycle_rounds);
      pass = rounding_pass<W>(num_nodes, vg, core, result.w, caps, config, seed, false, vcost, id_bits);
      after = fractional_edges(edges.size(), result.w, caps, config.tolerance);
      report.ldd_fallback = true;
    }
    if (after.size() >= frac.size()) throw std::logic_error("round_cycles: no progress on a cyclic fractional part");
    result.stats.add("ldd", pass.ldd);
    result.stats.add("t_join", pass.tjoin);
    result.stats.add("cycles", pass.cycle_rounds);
    report.clusters = pass.clusters;
    report.cycles = pass.cycles;
    report.cut_fraction = pass.cut_fraction;
    report.fractional_after = after.size();
    result.iterations.push_back(report);
    frac = std::move(after);
  }
  if constexpr (std::is_floating_point_v<W>) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (result.w[i] <= config.tolerance) result.w[i] = 0;
      else if (caps[i] - result.w[i] <= config.tolerance) result.w[i] = caps[i];
    }
  }
  return result;
}

template <class W>
RoundingResult<W> round_cycles(std::size_t num_nodes, std::span<const Edge> edges, std::vector<W> w,
                               const RoundingConfig& config) {
  const std::vector<W> caps(edges.size(), W(1));
  return round_cycles<W>(num_nodes, edges, std::move(w), std::span<const W>(caps), config);
}

#define SANTA_INSTANTIATE(W)                                                                                   \
  template W round_single_cycle<W>(std::span<const Edge>, std::span<const std::size_t>, std::vector<W>&,       \
                                   std::span<const W>, CycleOrientation, double);                              \
  template bool fractional_part_is_forest<W>(std::size_t, std::span<const Edge>, std::span<const W>,          \
                                             std::span<const W>, double);                                      \
  template RoundingResult<W> round_cycles<W>(std::size_t, std::span<const Edge>, std::vector<W>,              \
                                             std::span<const W>, const RoundingConfig&);                       \
  template RoundingResult<W> round_cycles<W>(std::size_t, std::span<const Edge>, std::vector<W>,              \
                                             const RoundingConfig&);

SANTA_INSTANTIATE(double)
SANTA_INSTANTIATE(Rational)

#undef SANTA_INSTANTIATE

}  // namespace santa::rounding
