#pragma once

#include <cstdint>
#include <string>

#include "santa/alloc/instance.hpp"

namespace santa::oracles {

using alloc::Instance;
using alloc::InstanceDocument;

// Node and gift layout of SC_n with s = sqrt(n).
struct ScnLayout {
  std::size_t side = 0;         // s
  std::size_t leaves = 0;       // s rounded up to a power of two
  std::size_t tree_levels = 0;  // log2(leaves) + 1
  alloc::ChildId alice = 0;
  alloc::ChildId bob = 0;
};

// s disjoint alternating paths of s children and s - 1 unit gifts, joined by
// a full binary tree whose leaves are children and whose levels alternate
// between children and unit gifts. Leaf j desires gift j of every path
// (leaves beyond s - 1 only their private gift); every tree child has a
// private unit gift. Alice and Bob each have a private unit gift and one
// boundary gift per path, valued a_i (resp. b_i), shared with the first
// (resp. last) child of path i. Bits are '0'/'1' strings of length s.
// Throws std::invalid_argument unless n is a positive perfect square with
// matching bit strings.
Instance gen_scn(std::size_t n, const std::string& a, const std::string& b, ScnLayout* layout = nullptr);

enum class PathVariant { kI1, kI2, kI3 };

// Alternating path of n children and n - 1 unit gifts; I2 adds a unit gift
// to the first child, I3 to the last.
Instance gen_path(PathVariant variant, std::size_t n);

// k children on a chain of k - 1 big gifts of value T, T unit gifts desired
// by every child. The fractional solution gives child i (1-based) weight
// (k - i)/k on its right big gift and (i - 1)/k on its left one, and hands
// out the small gifts round robin with weight 1. Requires k >= 2, T >= k.
InstanceDocument gen_sparsification_example(std::size_t k, std::int64_t T);

struct RandomSpec {
  std::size_t children = 4;
  std::size_t gifts = 6;
  std::int64_t value_lo = 1;
  std::int64_t value_hi = 10;
  double density = 0.5;
  std::uint64_t seed = 0;
};

// Integer values uniform in [value_lo, value_hi]; every pair is an edge
// independently with the given probability.
Instance gen_random(const RandomSpec& spec);

struct MixedSpec {
  std::size_t children = 4;
  std::size_t big = 2;           // gifts 0 .. big - 1, each desired by two children
  std::size_t small = 40;        // unit gifts after the big ones
  std::size_t small_degree = 2;  // distinct children desiring each unit gift
  std::int64_t big_value = 100;
  std::uint64_t seed = 0;
};

// Big gifts of value big_value on uniformly drawn child pairs and unit gifts
// on uniformly drawn child sets of size small_degree. Throws
// std::invalid_argument unless 2 <= children, 1 <= small_degree <= children
// and big_value >= 1.
Instance gen_mixed(const MixedSpec& spec);

// The instance restricted to desire edges of positive fractional weight.
Instance restrict_to_support(const InstanceDocument& doc);

PathVariant parse_path_variant(const std::string& name);

}  // namespace santa::oracles
