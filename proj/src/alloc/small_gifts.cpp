#include "santa/alloc/small_gifts.hpp"

#include <algorithm>
#include <stdexcept>

#include "santa/congest/virtual_graph.hpp"
#include "santa/rounding/cycle_rounding.hpp"

namespace santa::alloc {

SmallRounding round_small_gifts(const Instance& inst, const std::vector<bool>& big, const std::vector<Rational>& z,
                                std::uint64_t seed, std::int64_t virtual_round_cost) {
  SmallRounding out;
  out.owner.assign(inst.num_gifts(), kUnassigned);
  out.value_weight.assign(inst.edges.size(), Rational(0));
  std::vector<Rational> load(inst.num_gifts(), Rational(0));
  std::vector<std::size_t> index;
  std::vector<congest::Edge> edges;
  std::vector<Rational> w, caps;
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    const Rational& v = inst.values[e.gift];
    if (big[e.gift] || v == 0 || z[i] == 0) continue;
    if (z[i] < 0 || z[i] > 1) throw std::invalid_argument("round_small_gifts: z outside [0, 1]");
    load[e.gift] += z[i];
    index.push_back(i);
    edges.push_back({inst.child_node(e.child), inst.gift_node(e.gift)});
    w.push_back(z[i] * v);
    caps.push_back(v);
  }
  for (const auto& l : load) {
    if (l > 1) throw std::invalid_argument("round_small_gifts: small gift assigned more than once");
  }
  rounding::RoundingConfig cfg;
  cfg.seed = seed;
  cfg.virtual_round_cost = virtual_round_cost;
  auto rounded = rounding::round_cycles<Rational>(inst.num_nodes(), edges, std::move(w), caps, cfg);
  out.iterations = rounded.iterations.size();
  out.stats = std::move(rounded.stats);

  std::vector<congest::Edge> frac;
  std::vector<bool> fractional_gift(inst.num_gifts(), false);
  for (std::size_t k = 0; k < index.size(); ++k) {
    const std::size_t i = index[k];
    const DesireEdge& e = inst.edges[i];
    out.value_weight[i] = rounded.w[k];
    if (rounded.w[k] == caps[k]) {
      if (out.owner[e.gift] != kUnassigned) throw std::logic_error("round_small_gifts: gift rounded up twice");
      out.owner[e.gift] = e.child;
    } else if (rounded.w[k] > 0) {
      frac.push_back(edges[k]);
      fractional_gift[e.gift] = true;
    }
  }
  for (GiftId g = 0; g < inst.num_gifts(); ++g) {
    if (!fractional_gift[g]) continue;
    if (out.owner[g] != kUnassigned) throw std::logic_error("round_small_gifts: integral and fractional edges share a gift");
    ++out.forest_gifts;
  }

  // Children precede gifts in node order, so pinning each tree's lowest
  // child roots every tree at a child.
  const std::size_t n = inst.num_nodes();
  std::vector<congest::NodeId> comp(n);
  for (congest::NodeId v = 0; v < n; ++v) comp[v] = v;
  auto find = [&](congest::NodeId v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  for (const auto& e : frac) {
    const auto a = find(e.u), b = find(e.v);
    if (a == b) throw std::logic_error("round_small_gifts: fractional edges contain a cycle");
    comp[std::max(a, b)] = std::min(a, b);
  }
  std::vector<congest::NodeId> pinned;
  for (congest::NodeId v = 0; v < inst.num_children; ++v) {
    if (find(v) == v) pinned.push_back(v);
  }
  const congest::RootedForest rooted = congest::root_forest(n, frac, pinned);
  for (GiftId g = 0; g < inst.num_gifts(); ++g) {
    if (!fractional_gift[g]) continue;
    const congest::NodeId p = rooted.parent[inst.gift_node(g)];
    if (p == congest::kNoNode || p >= inst.num_children) throw std::logic_error("round_small_gifts: gift without parent child");
    out.owner[g] = p;
  }

  const std::int64_t bits = 2 * static_cast<std::int64_t>(congest::ceil_log2(std::max<std::size_t>(n, 2))) + 1;
  congest::RoundStats forest;
  forest.rounds_elapsed = frac.empty() ? 0 : 2 * rooted.iterations * std::max<std::int64_t>(virtual_round_cost, 1) + 1;
  forest.total_messages = frac.empty() ? 0 : 4 * static_cast<std::int64_t>(frac.size()) * rooted.iterations + 2 * static_cast<std::int64_t>(frac.size());
  forest.max_bits_on_any_edge_per_round = frac.empty() ? 0 : bits;
  out.stats.add("forest", forest);
  return out;
}

}  // namespace santa::alloc
