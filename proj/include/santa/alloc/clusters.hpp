#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "santa/alloc/santa_lp.hpp"
#include "santa/congest/round_stats.hpp"

namespace santa::alloc {

struct EliminateResult {
  std::vector<Rational> x;  // per desire edge; small-gift edges copied unchanged
  std::size_t iterations = 0;
  congest::StatsLog stats;
};

// Cycle rounding (rational mode) on the big-gift edges of positive weight.
// Child and gift sums of x are preserved and the positive edges form a
// forest.
EliminateResult eliminate_big_cycles(const Instance& inst, const FractionalSolution& sol, std::uint64_t seed,
                                     std::int64_t virtual_round_cost = 0);

struct ClusterTree {
  std::vector<ChildId> children;  // ascending
  std::vector<GiftId> gifts;      // ascending
  std::vector<std::size_t> edges; // desire-edge indices
  std::optional<GiftId> gift_leaf;  // lowest-id big gift of degree one
  std::optional<ChildId> lost_edge_child;  // child that lost its parent edge in pruning

  // All leaves are children: exactly one child must be served by small gifts.
  bool deficient() const { return !gift_leaf.has_value(); }
};

struct ClusterForest {
  std::vector<ClusterTree> trees;         // ordered by lowest child id
  std::vector<std::size_t> tree_of_child;
  std::vector<Rational> x;                // x*, per desire edge
  std::vector<std::size_t> dropped;       // desire-edge indices removed by pruning
  std::int64_t rooting_iterations = 0;
  congest::StatsLog stats;
};

// Roots every tree of the positive big-gift edges at its lowest-id child and
// cuts, for each big gift of degree d > 2, d - 2 edges to its own children
// of weight at most 1/2: lowest weight first, ties by child id. Every child
// becomes part of exactly one tree, possibly alone. Throws std::logic_error
// if the positive edges contain a cycle or a gift lacks enough light edges.
ClusterForest prune_big_clusters(const Instance& inst, const std::vector<bool>& big, std::vector<Rational> x,
                                 std::int64_t virtual_round_cost = 0);

struct BigAssignment {
  std::vector<std::int64_t> owner;       // per gift: child id or -1
  std::vector<ChildId> root;             // per tree
  std::int64_t rooting_iterations = 0;
  congest::StatsLog stats;
};

// Roots every tree: at the child next to its gift leaf when it has one,
// which then receives that leaf, otherwise at `chosen[t]`. Every other child
// receives its parent gift. Throws std::invalid_argument if a deficient tree
// has no chosen child or the choice lies outside the tree.
BigAssignment assign_big_gifts(const Instance& inst, const ClusterForest& forest,
                               const std::vector<std::optional<ChildId>>& chosen, std::int64_t virtual_round_cost = 0);

}  // namespace santa::alloc
