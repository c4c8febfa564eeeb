#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "santa/alloc/clusters.hpp"
#include "santa/alloc/instance.hpp"
#include "santa/alloc/santa_lp.hpp"
#include "santa/alloc/selection.hpp"
#include "santa/congest/round_stats.hpp"
#include "santa/lp/solver.hpp"

namespace santa::alloc {

// beta = max(2, ceil(c_beta ln n / ln ln n)); 2 when n < 3.
std::int64_t default_beta(std::size_t n, double c_beta);

struct PipelineConfig {
  std::uint64_t seed = 0;
  double eps = 0.5;         // probe accuracy
  double beta_const = 1.0;
  std::int64_t beta = 0;    // replaces default_beta when positive
  int max_retries = 3;      // extra rounding attempts at one T
  bool strict_bits = false;
  congest::ExecutionMode mode = congest::ExecutionMode::kFastPath;
  congest::NetworkConfig network{};
  std::int64_t max_lp_iterations = 0;  // solver cap override when positive
  double probe_margin = 0.2;           // see probe_packing_scale
  SelectionConfig selection{};
};

// Packing rows of a probe are multiplied by (1 - eps/50)(1 - margin) minus
// a rounding guard, strictly below the solver's infeasibility slack, so an
// Infeasible verdict proves that no point meets the unscaled rows. The
// margin keeps the solver's step 0.5 (1 - a/b) away from zero near the
// feasibility boundary.
double probe_packing_scale(double eps, double margin);

struct Probe {
  Rational T;
  bool feasible = false;
  lp::InfeasibleReason reason = lp::InfeasibleReason::kNone;
  std::int64_t iterations = 0;
  Rational theta;  // min covering row value after exact packing normalization
};

// One LP probe: build the rows at level T with big gifts at alpha * v >= T,
// solve, and normalize the solver's point so every unscaled packing row is
// at most 1 exactly. `solution` is filled when feasible.
Probe probe_lp(const Instance& inst, const Rational& T, const Rational& alpha, const PipelineConfig& config,
               FractionalSolution* solution, congest::RoundStats* stats);

// Memo of probes for one instance under one probe configuration. Probes do
// not depend on the seed, so runs sharing a cache produce the same output as
// runs without one. Throws std::invalid_argument when reused under a
// different alpha or probe configuration.
class ProbeCache {
 public:
  struct Entry {
    Probe probe;
    FractionalSolution solution;
    congest::RoundStats stats;
  };

  const Entry* find(const Rational& T) const;
  void insert(const Rational& T, Entry entry);
  void bind(const Rational& alpha, const PipelineConfig& config);
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<Rational, Entry> entries_;
  std::optional<std::string> key_;
};

struct SearchResult {
  Rational T;
  Rational scale;  // lcm of value denominators; T * scale is an integer
  Rational upper;  // initial upper end min(sum v, min_c desired value)
  std::vector<Probe> probes;
  FractionalSolution solution;  // at T; empty when T = 0
  congest::StatsLog stats;
};

// Binary search over integer multiples T * scale in [0, upper] for the
// largest feasible probe. A probe that fails for any reason, including the
// iteration cap, counts as infeasible.
SearchResult binary_search_T(const Instance& inst, const Rational& alpha, const PipelineConfig& config,
                             ProbeCache* cache = nullptr);

struct ValueLedger {
  Rational T;
  Rational alpha;
  Rational theta;          // certified covering level of the fractional point, relative to T
  Rational reserve_needed; // T / 4 per deficient tree
  Rational min_reserve;    // min V_S(C_i) over deficient trees; -1 when none
  Rational target;         // T / 2, spread over the chosen child's small gifts
  Rational chosen_value;   // target / beta
  Rational max_small;      // largest small-gift value
  Rational bound;          // T / alpha
  Rational achieved;       // min child value
};

struct PipelineAudit {
  ConstraintAudit lp;           // after normalization; packing must be clean
  ConstraintAudit eliminated;   // after cycle elimination; packing must be clean
  std::size_t degree_cap = 0;   // big gifts of pruned degree above 2
  std::size_t tree_loss = 0;    // trees with more than one child that lost an edge
  std::size_t reserve_short = 0;  // deficient trees below reserve_needed
  std::size_t small_count_checked = 0;  // children with nonzero small weights
  std::size_t small_count_below_alpha = 0;  // of those, touching at most alpha small gifts
  std::size_t small_count_bound = 0;  // of those, violating count * max_v_small * max_y > sum v y
  Rational first_max_load;
  Rational max_load;
  bool load_capped = false;
  std::size_t clamped = 0;
  bool valid = false;
  bool bound_met = false;
  std::string failure;          // empty on success

  // Failed a validity check (packing rows, degree cap, desire edges, or an
  // internal invariant) rather than the reserve or the T / alpha bound.
  bool validity_failed() const { return !failure.empty() && !valid && (reserve_short == 0 || degree_cap != 0); }
};

struct SolveResult {
  Assignment assignment;
  Rational value;
  Rational T;
  std::int64_t beta = 0;
  Rational alpha;
  int retries = 0;      // extra rounding attempts at the final T
  int fallbacks = 0;    // T lowered after every attempt failed
  std::vector<Probe> probes;
  ValueLedger ledger;
  PipelineAudit audit;
  std::vector<PipelineAudit> failed_attempts;
  congest::StatsLog stats;
};

// Binary search, cycle elimination, pruning, selection and rounding.
// Every attempt is audited; if all attempts at T fail, the search resumes
// below T.
SolveResult solve(const Instance& inst, const PipelineConfig& config = {}, ProbeCache* cache = nullptr);

}  // namespace santa::alloc
