#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "santa/alloc/clusters.hpp"
#include "santa/common/numbers.hpp"
#include "santa/congest/round_stats.hpp"

namespace santa::alloc {

enum class SamplingMode {
  kAuto,          // coordinator below the vertex threshold, rake/compress otherwise
  kCoordinator,
  kRakeCompress,
};

// Draws index k with probability weights[k] / sum(weights) by gathering all
// weights at one node. Requires a positive total.
std::size_t sample_coordinator(std::span<const double> weights, Rng& rng);

struct TreeSample {
  std::size_t index = 0;
  std::int64_t iterations = 0;    // rake/compress iterations
  std::int64_t longest_chain = 0; // longest compressed run
};

// Same distribution, by merging weighted candidates along an iterated
// rake/compress of the tree on `weights.size()` vertices. Leaves merge into
// their neighbor; maximal runs of at least two degree-2 vertices merge into
// their lowest index. A merge keeps the incoming candidate with probability
// W_in / (W_in + W_keep). Throws std::invalid_argument if `edges` is not a
// tree.
TreeSample sample_rake_compress(std::span<const double> weights, std::span<const std::pair<std::size_t, std::size_t>> edges,
                                Rng& rng);

struct SelectionConfig {
  SamplingMode mode = SamplingMode::kAuto;
  std::size_t coordinator_threshold = 64;  // tree vertices
  int max_retries = 3;                     // extra draws after a load violation
};

struct SelectionResult {
  std::vector<std::optional<ChildId>> chosen;  // per tree; set for deficient trees
  std::vector<Rational> z;                     // per desire edge; zero on big-gift edges
  std::vector<Rational> small_value;           // V_S(c) per child
  std::vector<Rational> tree_value;            // V_S(C_i) per tree
  Rational max_load;                           // max over small gifts of sum_c z_cs
  int attempts = 0;
  bool load_capped = false;   // every draw overloaded; z scaled by 1 / max_load
  Rational first_max_load;    // max load of the first draw
  std::size_t clamped = 0;    // entries of z cut back to 1
  std::int64_t sampling_iterations = 0;
  congest::StatsLog stats;
};

// Picks, for every deficient tree, one child c with probability
// V_S(c) / V_S(C_i), where V_S(c) = sum_s v_s w_cs over small gifts, and sets
//   z_cs = w_cs * target / (beta * V_S(c))
// for the chosen child and zero elsewhere, each entry capped at 1. Draws are independent per tree,
// seeded by the tree's lowest child. A draw with some small-gift load above 1
// is repeated with a fresh seed. Throws std::logic_error if a deficient tree
// has V_S(C_i) = 0.
SelectionResult select_children(const Instance& inst, const ClusterForest& forest, const std::vector<bool>& big,
                                const std::vector<Rational>& w, const Rational& target, std::int64_t beta,
                                std::uint64_t seed, const SelectionConfig& config = {});

}  // namespace santa::alloc
