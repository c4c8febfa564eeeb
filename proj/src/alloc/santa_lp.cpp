#include "santa/alloc/santa_lp.hpp"

#include <map>
#include <stdexcept>

namespace santa::alloc {

std::vector<bool> classify_gifts(const Instance& inst, const Rational& T, const Rational& alpha) {
  std::vector<bool> big(inst.num_gifts());
  for (std::size_t g = 0; g < inst.num_gifts(); ++g) big[g] = alpha * inst.values[g] >= T;
  return big;
}

SantaLp build_santa_lp(const Instance& inst, const Rational& T, const Rational& alpha, const Rational& level,
                       double packing_scale) {
  if (!(level > 0)) throw std::invalid_argument("build_santa_lp: covering level must be positive");
  if (!(packing_scale > 0)) throw std::invalid_argument("build_santa_lp: packing scale must be positive");
  SantaLp out;
  out.big = classify_gifts(inst, T, alpha);
  out.level = level;
  out.packing_scale = packing_scale;
  out.var_of_edge.assign(inst.edges.size(), -1);
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    if (inst.values[inst.edges[i].gift] > 0) {
      out.var_of_edge[i] = static_cast<std::int64_t>(out.edge_of_var.size());
      out.edge_of_var.push_back(i);
    }
  }
  lp::MixedLP& lp = out.lp;
  lp.num_vars = out.edge_of_var.size();

  std::vector<std::vector<std::size_t>> big_vars_of_child(inst.num_children);
  std::map<GiftId, std::vector<std::size_t>> vars_of_big, vars_of_small;
  for (std::size_t v = 0; v < lp.num_vars; ++v) {
    const DesireEdge& e = inst.edges[out.edge_of_var[v]];
    if (out.big[e.gift]) {
      big_vars_of_child[e.child].push_back(v);
      vars_of_big[e.gift].push_back(v);
    } else {
      vars_of_small[e.gift].push_back(v);
    }
  }

  for (ChildId c = 0; c < inst.num_children; ++c) {
    lp::Row row;
    for (std::size_t v : big_vars_of_child[c]) row.push_back({v, 1.0});
    out.covering_child.push_back(c);
    lp.covering.push_back(std::move(row));
  }
  for (std::size_t v = 0; v < lp.num_vars; ++v) {
    const DesireEdge& e = inst.edges[out.edge_of_var[v]];
    if (out.big[e.gift]) continue;
    const Rational coef = inst.values[e.gift] / level;
    lp.covering[e.child].push_back({v, coef.get_d()});
    // Pair row for (c, s).
    lp::Row pair{{v, packing_scale}};
    for (std::size_t b : big_vars_of_child[e.child]) pair.push_back({b, packing_scale});
    lp.packing.push_back(std::move(pair));
    out.packing_info.push_back({PackingKind::kPair, e.child, e.gift});
  }
  for (const auto& [g, vars] : vars_of_big) {
    lp::Row row;
    for (std::size_t v : vars) row.push_back({v, packing_scale});
    lp.packing.push_back(std::move(row));
    out.packing_info.push_back({PackingKind::kBigGift, 0, g});
  }
  for (ChildId c = 0; c < inst.num_children; ++c) {
    if (big_vars_of_child[c].empty()) continue;
    lp::Row row;
    for (std::size_t v : big_vars_of_child[c]) row.push_back({v, packing_scale});
    lp.packing.push_back(std::move(row));
    out.packing_info.push_back({PackingKind::kChild, c, 0});
  }
  for (const auto& [g, vars] : vars_of_small) {
    lp::Row row;
    for (std::size_t v : vars) row.push_back({v, packing_scale});
    lp.packing.push_back(std::move(row));
    out.packing_info.push_back({PackingKind::kSmallGift, 0, g});
  }
  lp.canonicalize();
  return out;
}

SantaLp build_santa_lp(const Instance& inst, const Rational& T, const Rational& alpha) {
  return build_santa_lp(inst, T, alpha, T, 1);
}

std::vector<Rational> small_value(const Instance& inst, const FractionalSolution& sol) {
  std::vector<Rational> out(inst.num_children, Rational(0));
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (!sol.big[e.gift]) out[e.child] += inst.values[e.gift] * sol.w[i];
  }
  return out;
}

std::vector<Rational> big_mass(const Instance& inst, const FractionalSolution& sol) {
  std::vector<Rational> out(inst.num_children, Rational(0));
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (sol.big[e.gift]) out[e.child] += sol.w[i];
  }
  return out;
}

ConstraintAudit audit_constraints(const Instance& inst, const FractionalSolution& sol,
                                  const std::vector<bool>& skip_cover) {
  ConstraintAudit audit;
  const auto sv = small_value(inst, sol);
  const auto bm = big_mass(inst, sol);
  std::vector<Rational> gift_load(inst.num_gifts(), Rational(0));
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (sol.w[i] < 0 || sol.w[i] > 1) ++audit.out_of_range;
    gift_load[e.gift] += sol.w[i];
    if (!sol.big[e.gift] && sol.w[i] + bm[e.child] > 1) ++audit.pair;
  }
  for (GiftId g = 0; g < inst.num_gifts(); ++g) {
    if (gift_load[g] > 1) ++(sol.big[g] ? audit.big_gift : audit.small_gift);
  }
  for (ChildId c = 0; c < inst.num_children; ++c) {
    if (bm[c] > 1) ++audit.child;
    const bool skip = c < skip_cover.size() && skip_cover[c];
    if (!skip && sv[c] < sol.level * (1 - bm[c])) ++audit.cover;
  }
  return audit;
}

}  // namespace santa::alloc
