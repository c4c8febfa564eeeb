#pragma once

#include <vector>

#include "santa/alloc/instance.hpp"
#include "santa/lp/mixed_lp.hpp"

namespace santa::alloc {

// Big iff alpha * v >= T; with T = 0 every gift is big.
std::vector<bool> classify_gifts(const Instance& inst, const Rational& T, const Rational& alpha);

enum class PackingKind {
  kPair,       // z_cs + sum_b x_cb <= 1 for a desire pair (c, s)
  kBigGift,    // sum_c x_cb <= 1
  kChild,      // sum_b x_cb <= 1
  kSmallGift,  // sum_c z_cs <= 1
};

struct PackingRowInfo {
  PackingKind kind = PackingKind::kPair;
  ChildId child = 0;  // kPair, kChild
  GiftId gift = 0;    // kPair, kBigGift, kSmallGift
};

struct SantaLp {
  lp::MixedLP lp;                      // normalized and canonical
  std::vector<std::size_t> edge_of_var;  // desire-edge index per variable
  std::vector<std::int64_t> var_of_edge; // -1 for edges without a variable
  std::vector<bool> big;                 // per gift
  std::vector<PackingRowInfo> packing_info;
  std::vector<ChildId> covering_child;
  Rational level;
  double packing_scale = 1;
};

// Rows of the Santa LP with gifts split at T / alpha and covering level
// `level` > 0, each child c giving
//   sum_s (v_s / level) z_cs + sum_b x_cb >= 1,
// and the packing rows listed in PackingKind, each multiplied by
// packing_scale. Variables exist on desire edges to gifts of positive value.
// A child without such edges keeps an empty covering row.
SantaLp build_santa_lp(const Instance& inst, const Rational& T, const Rational& alpha, const Rational& level,
                       double packing_scale = 1);

// Covering level `T`, unscaled packing.
SantaLp build_santa_lp(const Instance& inst, const Rational& T, const Rational& alpha);

// Per-desire-edge weights: x on edges to big gifts, y (later z) on edges to
// small gifts.
struct FractionalSolution {
  Rational T;      // search value
  Rational alpha;  // classification factor
  Rational level;  // sum_s v_s y_cs >= level (1 - sum_b x_cb)
  std::vector<bool> big;
  std::vector<Rational> w;
};

struct ConstraintAudit {
  std::size_t cover = 0;       // children below `level`
  std::size_t pair = 0;
  std::size_t big_gift = 0;
  std::size_t child = 0;
  std::size_t small_gift = 0;
  std::size_t out_of_range = 0;

  std::size_t packing() const { return pair + big_gift + child + small_gift + out_of_range; }
  std::size_t total() const { return cover + packing(); }
};

// Exact recount of every constraint. Children listed in `skip_cover` are
// exempt from the covering check.
ConstraintAudit audit_constraints(const Instance& inst, const FractionalSolution& sol,
                                  const std::vector<bool>& skip_cover = {});

// Per child: sum_s v_s y_cs and sum_b x_cb.
std::vector<Rational> small_value(const Instance& inst, const FractionalSolution& sol);
std::vector<Rational> big_mass(const Instance& inst, const FractionalSolution& sol);

}  // namespace santa::alloc
