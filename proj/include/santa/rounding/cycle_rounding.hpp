#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "santa/common/numbers.hpp"
#include "santa/congest/round_stats.hpp"
#include "santa/rounding/ldd.hpp"

namespace santa::rounding {

enum class CycleOrientation {
  kLargerStep,     // orientation moving more weight; ties raise the lowest edge id
  kDecreaseFirst,  // first cycle edge decreases
  kIncreaseFirst,  // first cycle edge increases
};

// An edge is integral iff min(w, cap - w) <= tolerance. Rational weights use
// exact comparison and ignore the tolerance.
bool is_integral(double w, double cap, double tolerance);
bool is_integral(const Rational& w, const Rational& cap, double tolerance);

// Shifts the weights of a fully fractional even cycle, given as edge indices
// in walk order, alternately by +delta and -delta where delta is the largest
// step keeping every weight in [0, cap]. Every vertex keeps its weighted
// degree and at least one cycle edge becomes integral. Returns delta.
// Throws std::invalid_argument if the sequence is not a closed walk of even
// length over distinct fractional edges.
template <class W>
W round_single_cycle(std::span<const Edge> edges, std::span<const std::size_t> cycle, std::vector<W>& w,
                     std::span<const W> caps, CycleOrientation orientation = CycleOrientation::kLargerStep,
                     double tolerance = 1e-9);

struct RoundingConfig {
  std::uint64_t seed = 0;
  LddConfig ldd{};
  bool use_ldd = true;
  double tolerance = 1e-9;  // float mode only
  // Base rounds per virtual round; 0 means ceil(sqrt n) + largest component diameter.
  std::int64_t virtual_round_cost = 0;
};

struct IterationReport {
  std::size_t fractional_before = 0;
  std::size_t fractional_after = 0;
  std::size_t working_vertices = 0;  // virtual vertices after rake and odd-path contraction
  std::size_t working_edges = 0;     // virtual edges
  std::size_t clusters = 0;
  std::size_t cycles = 0;
  double cut_fraction = 0;
  bool ldd_fallback = false;  // the LDD pass made no progress and was redone with one cluster per component
};

template <class W>
struct RoundingResult {
  std::vector<W> w;
  std::vector<IterationReport> iterations;
  congest::StatsLog stats;
};

// Rounds the weights of a simple bipartite graph until the non-integral edges
// form a forest while every vertex keeps its weighted degree. Each pass
// restricts to fractional edges, rakes degree-one vertices, contracts
// odd-length degree-two paths, clusters by LDD, removes a T-join of the
// odd-degree vertices per cluster, and rounds the Euler partition of the
// rest. In float mode weights within the tolerance of a bound are snapped
// to it at the end. Throws std::invalid_argument for weights outside
// [0, cap], non-positive caps, parallel edges, or an odd cycle.
template <class W>
RoundingResult<W> round_cycles(std::size_t num_nodes, std::span<const Edge> edges, std::vector<W> w,
                               std::span<const W> caps, const RoundingConfig& config = {});

// Unit caps.
template <class W>
RoundingResult<W> round_cycles(std::size_t num_nodes, std::span<const Edge> edges, std::vector<W> w,
                               const RoundingConfig& config = {});

// True iff the edges with non-integral weight form a forest.
template <class W>
bool fractional_part_is_forest(std::size_t num_nodes, std::span<const Edge> edges, std::span<const W> w,
                               std::span<const W> caps, double tolerance = 1e-9);

}  // namespace santa::rounding
