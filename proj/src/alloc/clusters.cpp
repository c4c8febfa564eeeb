#include "santa/alloc/clusters.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "santa/congest/virtual_graph.hpp"
#include "santa/rounding/cycle_rounding.hpp"

namespace santa::alloc {

EliminateResult eliminate_big_cycles(const Instance& inst, const FractionalSolution& sol, std::uint64_t seed,
                                     std::int64_t virtual_round_cost) {
  EliminateResult out;
  out.x = sol.w;
  std::vector<std::size_t> index;
  std::vector<congest::Edge> edges;
  std::vector<Rational> w;
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (!sol.big[e.gift] || !(sol.w[i] > 0)) continue;
    index.push_back(i);
    edges.push_back({inst.child_node(e.child), inst.gift_node(e.gift)});
    w.push_back(sol.w[i]);
  }
  rounding::RoundingConfig cfg;
  cfg.seed = seed;
  cfg.virtual_round_cost = virtual_round_cost;
  auto rounded = rounding::round_cycles<Rational>(inst.num_nodes(), edges, std::move(w), cfg);
  for (std::size_t k = 0; k < index.size(); ++k) out.x[index[k]] = rounded.w[k];
  out.iterations = rounded.iterations.size();
  out.stats = std::move(rounded.stats);
  return out;
}

ClusterForest prune_big_clusters(const Instance& inst, const std::vector<bool>& big, std::vector<Rational> x,
                                 std::int64_t virtual_round_cost) {
  ClusterForest out;
  const std::size_t n = inst.num_nodes();
  std::vector<std::size_t> active;
  std::vector<congest::Edge> forest;
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    if (big[inst.edges[i].gift] && x[i] > 0) {
      active.push_back(i);
      forest.push_back({inst.child_node(inst.edges[i].child), inst.gift_node(inst.edges[i].gift)});
    }
  }
  // Pin the lowest-id child of every tree; children precede gifts in node order.
  std::vector<congest::NodeId> comp(n);
  for (congest::NodeId v = 0; v < n; ++v) comp[v] = v;
  auto find = [&](congest::NodeId v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  for (const auto& e : forest) {
    const auto a = find(e.u), b = find(e.v);
    if (a == b) throw std::logic_error("prune_big_clusters: big-gift edges contain a cycle");
    comp[std::max(a, b)] = std::min(a, b);
  }
  std::vector<congest::NodeId> pinned;
  for (congest::NodeId v = 0; v < inst.num_children; ++v) {
    if (find(v) == v) pinned.push_back(v);
  }
  const congest::RootedForest rooted = congest::root_forest(n, forest, pinned);
  out.rooting_iterations = rooted.iterations;

  // Children of each gift in the rooted forest, with their edge index.
  std::map<GiftId, std::vector<std::size_t>> below;
  std::map<GiftId, std::size_t> degree;
  for (std::size_t i : active) {
    const DesireEdge& e = inst.edges[i];
    ++degree[e.gift];
    if (rooted.parent[inst.child_node(e.child)] == inst.gift_node(e.gift)) below[e.gift].push_back(i);
  }
  std::vector<bool> dropped(inst.edges.size(), false);
  for (const auto& [g, d] : degree) {
    if (d <= 2) continue;
    std::vector<std::size_t> light;
    for (std::size_t i : below[g]) {
      if (x[i] * 2 <= 1) light.push_back(i);
    }
    if (light.size() < d - 2) throw std::logic_error("prune_big_clusters: gift has too few light edges");
    std::sort(light.begin(), light.end(), [&](std::size_t a, std::size_t b) {
      if (x[a] != x[b]) return x[a] < x[b];
      return inst.edges[a].child < inst.edges[b].child;
    });
    for (std::size_t k = 0; k < d - 2; ++k) {
      dropped[light[k]] = true;
      out.dropped.push_back(light[k]);
    }
  }
  std::sort(out.dropped.begin(), out.dropped.end());
  for (std::size_t i : out.dropped) x[i] = 0;

  // Trees of the pruned forest; every child belongs to one.
  for (congest::NodeId v = 0; v < n; ++v) comp[v] = v;
  std::vector<std::size_t> kept;
  std::map<GiftId, std::size_t> kept_degree;
  for (std::size_t i : active) {
    if (dropped[i]) continue;
    kept.push_back(i);
    ++kept_degree[inst.edges[i].gift];
    const auto a = find(inst.child_node(inst.edges[i].child)), b = find(inst.gift_node(inst.edges[i].gift));
    comp[std::max(a, b)] = std::min(a, b);
  }
  out.tree_of_child.assign(inst.num_children, 0);
  std::map<congest::NodeId, std::size_t> tree_of_root;
  for (ChildId c = 0; c < inst.num_children; ++c) {
    const auto r = find(c);
    auto [it, fresh] = tree_of_root.emplace(r, out.trees.size());
    if (fresh) out.trees.emplace_back();
    out.trees[it->second].children.push_back(c);
    out.tree_of_child[c] = it->second;
  }
  for (std::size_t i : kept) {
    const DesireEdge& e = inst.edges[i];
    ClusterTree& t = out.trees[out.tree_of_child[e.child]];
    t.edges.push_back(i);
    if (std::find(t.gifts.begin(), t.gifts.end(), e.gift) == t.gifts.end()) t.gifts.push_back(e.gift);
  }
  for (ClusterTree& t : out.trees) {
    std::sort(t.gifts.begin(), t.gifts.end());
    for (GiftId g : t.gifts) {
      if (kept_degree[g] == 1) {
        t.gift_leaf = g;
        break;
      }
    }
  }
  for (std::size_t i : out.dropped) {
    ClusterTree& t = out.trees[out.tree_of_child[inst.edges[i].child]];
    if (t.lost_edge_child.has_value()) throw std::logic_error("prune_big_clusters: two children of one tree lost edges");
    t.lost_edge_child = inst.edges[i].child;
  }
  out.x = std::move(x);

  const std::int64_t bits = 2 * static_cast<std::int64_t>(congest::ceil_log2(std::max<std::size_t>(n, 2))) + 1;
  congest::RoundStats rooting;
  rooting.rounds_elapsed = 2 * rooted.iterations * std::max<std::int64_t>(virtual_round_cost, 1);
  rooting.total_messages = 4 * static_cast<std::int64_t>(forest.size()) * std::max<std::int64_t>(rooted.iterations, 1);
  rooting.max_bits_on_any_edge_per_round = forest.empty() ? 0 : bits;
  out.stats.add("prune_rooting", rooting);
  congest::RoundStats cut;
  cut.rounds_elapsed = forest.empty() ? 0 : 2;
  cut.total_messages = 2 * static_cast<std::int64_t>(active.size());
  cut.max_bits_on_any_edge_per_round = forest.empty() ? 0 : bits;
  out.stats.add("prune_cut", cut);
  return out;
}

BigAssignment assign_big_gifts(const Instance& inst, const ClusterForest& forest,
                               const std::vector<std::optional<ChildId>>& chosen, std::int64_t virtual_round_cost) {
  if (chosen.size() != forest.trees.size()) throw std::invalid_argument("assign_big_gifts: one choice slot per tree");
  BigAssignment out;
  out.owner.assign(inst.num_gifts(), -1);
  std::vector<congest::Edge> edges;
  std::vector<congest::NodeId> pinned;
  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    const ClusterTree& tree = forest.trees[t];
    ChildId root = 0;
    if (tree.gift_leaf) {
      bool found = false;
      for (std::size_t i : tree.edges) {
        if (inst.edges[i].gift == *tree.gift_leaf) {
          root = inst.edges[i].child;
          found = true;
        }
      }
      if (!found) throw std::logic_error("assign_big_gifts: gift leaf without edge");
      out.owner[*tree.gift_leaf] = root;
    } else {
      if (!chosen[t]) throw std::invalid_argument("assign_big_gifts: deficient tree without chosen child");
      root = *chosen[t];
      if (!std::binary_search(tree.children.begin(), tree.children.end(), root)) {
        throw std::invalid_argument("assign_big_gifts: chosen child outside its tree");
      }
    }
    out.root.push_back(root);
    pinned.push_back(inst.child_node(root));
    for (std::size_t i : tree.edges) edges.push_back({inst.child_node(inst.edges[i].child), inst.gift_node(inst.edges[i].gift)});
  }
  const std::size_t n = inst.num_nodes();
  const congest::RootedForest rooted = congest::root_forest(n, edges, pinned);
  out.rooting_iterations = rooted.iterations;
  for (ChildId c = 0; c < inst.num_children; ++c) {
    const congest::NodeId p = rooted.parent[inst.child_node(c)];
    if (p == congest::kNoNode) continue;
    const GiftId g = static_cast<GiftId>(p - inst.num_children);
    if (out.owner[g] != -1) throw std::logic_error("assign_big_gifts: gift has two child nodes");
    out.owner[g] = c;
  }

  const std::int64_t bits = 2 * static_cast<std::int64_t>(congest::ceil_log2(std::max<std::size_t>(n, 2))) + 1;
  congest::RoundStats st;
  st.rounds_elapsed = edges.empty() ? 0 : 2 * rooted.iterations * std::max<std::int64_t>(virtual_round_cost, 1) + 1;
  st.total_messages = edges.empty() ? 0 : 4 * static_cast<std::int64_t>(edges.size()) * rooted.iterations + static_cast<std::int64_t>(inst.num_children);
  st.max_bits_on_any_edge_per_round = edges.empty() ? 0 : bits;
  out.stats.add("big_assign", st);
  return out;
}

}  // namespace santa::alloc
