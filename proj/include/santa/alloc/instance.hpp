#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "santa/common/numbers.hpp"
#include "santa/congest/network.hpp"

namespace santa::alloc {

using ChildId = std::uint32_t;
using GiftId = std::uint32_t;

struct DesireEdge {
  ChildId child = 0;
  GiftId gift = 0;
  friend auto operator<=>(const DesireEdge&, const DesireEdge&) = default;
};

// Bipartite desire graph. On the network children are nodes [0, |C|) and
// gift g is node |C| + g.
struct Instance {
  std::size_t num_children = 0;
  std::vector<Rational> values;  // per gift, nonnegative
  std::vector<DesireEdge> edges; // sorted and unique after canonicalize()

  std::size_t num_gifts() const { return values.size(); }
  std::size_t num_nodes() const { return num_children + values.size(); }
  congest::NodeId child_node(ChildId c) const { return c; }
  congest::NodeId gift_node(GiftId g) const { return static_cast<congest::NodeId>(num_children + g); }

  // Sorts edges. Throws std::invalid_argument on out-of-range ids, duplicate
  // edges or negative values.
  void canonicalize();
  bool has_edge(ChildId c, GiftId g) const;
  std::vector<std::vector<GiftId>> gifts_of_child() const;
  std::vector<std::vector<ChildId>> children_of_gift() const;
  std::vector<congest::Edge> network_edges() const;
  // Total value each child desires.
  std::vector<Rational> desired_value() const;
};

struct FractionalEntry {
  ChildId child = 0;
  GiftId gift = 0;
  Rational weight;
};

struct InstanceDocument {
  Instance instance;
  std::vector<FractionalEntry> fractional;
};

// Line format: `santa <|C|> <|G|>` first, then `gift <id> <value>` once per
// gift, `edge <child> <gift>`, and `frac <child> <gift> <num>/<den>` on
// desire edges. `#` starts a comment. Throws std::runtime_error with the
// line number on malformed input.
InstanceDocument read_instance(std::istream& in);
InstanceDocument read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& inst, std::span<const FractionalEntry> fractional = {});

struct GiftAssignment {
  GiftId gift = 0;
  ChildId child = 0;
  friend auto operator<=>(const GiftAssignment&, const GiftAssignment&) = default;
};

// Lines `<gift_id> <child_id>`; duplicates are kept for the verifier to judge.
using Assignment = std::vector<GiftAssignment>;

Assignment read_assignment(std::istream& in);
Assignment read_assignment_file(const std::string& path);
void write_assignment(std::ostream& out, const Assignment& assignment);

}  // namespace santa::alloc
