#include "santa/alloc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "santa/alloc/small_gifts.hpp"
#include "santa/congest/primitives.hpp"

namespace santa::alloc {

std::int64_t default_beta(std::size_t n, double c_beta) {
  if (n < 3) return 2;
  const double ln = std::log(static_cast<double>(n));
  const double b = std::ceil(c_beta * ln / std::log(ln));
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(b));
}

double probe_packing_scale(double eps, double margin) {
  if (!(margin >= 0 && margin < 1)) throw std::invalid_argument("probe_packing_scale: margin outside [0, 1)");
  return (1 - eps / 50) * (1 - margin) - 1e-9;
}

namespace {

constexpr long kGridBits = 40;

Rational to_grid(double x) {
  if (!(x > 0)) return 0;
  const double scaled = std::floor(std::ldexp(x, kGridBits));
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), scaled);
  mpz_class den = 1;
  den <<= kGridBits;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exact maximum over the unscaled packing rows of the Santa LP.
Rational max_packing(const Instance& inst, const std::vector<bool>& big, const std::vector<Rational>& w) {
  std::vector<Rational> child_big(inst.num_children, Rational(0));
  std::vector<Rational> gift(inst.num_gifts(), Rational(0));
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (big[e.gift]) child_big[e.child] += w[i];
    gift[e.gift] += w[i];
  }
  Rational m = 0;
  for (const auto& v : child_big) m = std::max(m, v);
  for (const auto& v : gift) m = std::max(m, v);
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (!big[e.gift] && w[i] > 0) m = std::max(m, Rational(w[i] + child_big[e.child]));
  }
  return m;
}

Rational lcm_of_denominators(const Instance& inst) {
  mpz_class l = 1;
  for (const auto& v : inst.values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return Rational(l);
}

mpz_class floor_of(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

struct Coordination {
  std::unique_ptr<congest::Network> net;
  congest::BfsTree tree;
  congest::RoundStats setup;
};

// Instance network with components linked in id order, a leader and a BFS
// tree for announcing probe values and verdicts.
Coordination coordinate(const Instance& inst, const PipelineConfig& config) {
  Coordination out;
  const std::size_t n = inst.num_nodes();
  std::vector<congest::Edge> edges = inst.network_edges();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    const std::size_t a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  congest::NodeId previous = congest::kNoNode;
  for (congest::NodeId v = 0; v < n; ++v) {
    if (find(v) != v) continue;
    if (previous != congest::kNoNode) edges.push_back({previous, v});
    previous = v;
  }
  congest::NetworkConfig net_config = config.network;
  net_config.strict = config.strict_bits;
  out.net = std::make_unique<congest::Network>(n, edges, net_config);
  const congest::Leader leader = congest::elect_leader(*out.net, config.mode);
  out.tree = congest::bfs_tree(*out.net, leader.node, config.mode);
  out.setup = out.net->stats();
  return out;
}

std::uint32_t bits_of(const mpz_class& v) {
  return static_cast<std::uint32_t>(std::max<std::size_t>(1, mpz_sizeinbase(v.get_mpz_t(), 2)));
}

}  // namespace

Probe probe_lp(const Instance& inst, const Rational& T, const Rational& alpha, const PipelineConfig& config,
               FractionalSolution* solution, congest::RoundStats* stats) {
  Probe probe;
  probe.T = T;
  if (T <= 0) throw std::invalid_argument("probe_lp: T must be positive");
  const SantaLp santa = build_santa_lp(inst, T, alpha, T, probe_packing_scale(config.eps, config.probe_margin));
  for (const auto& row : santa.lp.covering) {
    if (row.empty()) {
      probe.reason = lp::InfeasibleReason::kEmptyCoveringRow;
      return probe;
    }
  }
  lp::SolverOptions opt;
  opt.eps = config.eps;
  opt.strict_bits = config.strict_bits;
  opt.mode = config.mode;
  opt.network = config.network;
  opt.network.strict = config.strict_bits;
  opt.max_iterations = config.max_lp_iterations;
  const lp::FeasibilityResult r = lp::solve_feasibility(santa.lp, opt);
  probe.iterations = r.iterations;
  if (stats) *stats = r.stats;
  if (r.verdict != lp::Verdict::kFeasible) {
    probe.reason = r.reason;
    return probe;
  }
  FractionalSolution sol;
  sol.T = T;
  sol.alpha = alpha;
  sol.level = T;
  sol.big = santa.big;
  sol.w.assign(inst.edges.size(), Rational(0));
  for (std::size_t v = 0; v < santa.edge_of_var.size(); ++v) sol.w[santa.edge_of_var[v]] = to_grid(r.x[v]);
  const Rational m = max_packing(inst, sol.big, sol.w);
  if (m == 0) {
    probe.reason = lp::InfeasibleReason::kNoImprovableVariable;
    return probe;
  }
  for (auto& v : sol.w) v /= m;
  const auto sv = small_value(inst, sol);
  const auto bm = big_mass(inst, sol);
  std::optional<Rational> theta;
  for (ChildId c = 0; c < inst.num_children; ++c) {
    const Rational row = sv[c] / T + bm[c];
    if (!theta || row < *theta) theta = row;
  }
  probe.theta = theta.value_or(Rational(0));
  if (probe.theta == 0) {
    probe.reason = lp::InfeasibleReason::kNoImprovableVariable;
    return probe;
  }
  probe.feasible = true;
  if (solution) *solution = std::move(sol);
  return probe;
}

const ProbeCache::Entry* ProbeCache::find(const Rational& T) const {
  const auto it = entries_.find(T);
  return it == entries_.end() ? nullptr : &it->second;
}

void ProbeCache::insert(const Rational& T, Entry entry) { entries_.insert_or_assign(T, std::move(entry)); }

void ProbeCache::bind(const Rational& alpha, const PipelineConfig& config) {
  std::string key = to_string(alpha) + "|" + std::to_string(config.eps) + "|" + std::to_string(config.strict_bits) + "|" +
                    std::to_string(static_cast<int>(config.mode)) + "|" + std::to_string(config.max_lp_iterations) + "|" + std::to_string(config.probe_margin) + "|" +
                    std::to_string(config.network.bandwidth_constant) + "|" + std::to_string(config.network.bits_per_edge);
  if (key_ && *key_ != key) throw std::invalid_argument("ProbeCache: reused under a different probe configuration");
  key_ = std::move(key);
}

namespace {

struct SearchState {
  mpz_class lo, hi;
  std::map<mpz_class, FractionalSolution> feasible;  // by T * scale
};

struct SearchContext {
  const Instance& inst;
  const Rational& alpha;
  const PipelineConfig& config;
  const Rational& scale;
  Coordination& coord;
  ProbeCache* cache;
  std::vector<Probe>& probes;
  congest::RoundStats lp_stats{};
  congest::RoundStats broadcast{};
  std::uint32_t value_bits = 1;
};

// Announces T, runs (or recalls) its probe and gathers the verdict.
bool probe_at(SearchContext& ctx, const mpz_class& T_scaled, FractionalSolution& sol) {
  const Rational T = Rational(T_scaled) / ctx.scale;
  congest::RoundStats st;
  Probe p;
  if (const ProbeCache::Entry* hit = ctx.cache ? ctx.cache->find(T) : nullptr) {
    p = hit->probe;
    sol = hit->solution;
    st = hit->stats;
  } else {
    p = probe_lp(ctx.inst, T, ctx.alpha, ctx.config, &sol, &st);
    if (ctx.cache) ctx.cache->insert(T, {p, sol, st});
  }
  ctx.lp_stats += st;
  ctx.broadcast += congest::downcast_cost(*ctx.coord.net, ctx.coord.tree, ctx.value_bits);
  ctx.broadcast += congest::aggregate_cost(*ctx.coord.net, ctx.coord.tree, 1);
  const bool feasible = p.feasible;
  ctx.probes.push_back(std::move(p));
  return feasible;
}

void run_search(SearchContext& ctx, SearchState& state) {
  while (state.lo < state.hi) {
    mpz_class mid = state.lo + state.hi + 1;
    mpz_fdiv_q_2exp(mid.get_mpz_t(), mid.get_mpz_t(), 1);
    FractionalSolution sol;
    if (probe_at(ctx, mid, sol)) {
      state.lo = mid;
      state.feasible[mid] = std::move(sol);
    } else {
      state.hi = mid - 1;
    }
  }
}

Rational search_upper(const Instance& inst) {
  Rational total = 0;
  for (const auto& v : inst.values) total += v;
  Rational upper = total;
  for (const auto& d : inst.desired_value()) upper = std::min(upper, d);
  return upper;
}

}  // namespace

SearchResult binary_search_T(const Instance& inst, const Rational& alpha, const PipelineConfig& config,
                             ProbeCache* cache) {
  if (cache) cache->bind(alpha, config);
  SearchResult out;
  out.scale = lcm_of_denominators(inst);
  out.upper = search_upper(inst);
  Coordination coord = coordinate(inst, config);
  SearchState state;
  state.lo = 0;
  state.hi = floor_of(out.upper * out.scale);
  SearchContext ctx{inst, alpha, config, out.scale, coord, cache, out.probes};
  ctx.value_bits = bits_of(state.hi) + 1;
  run_search(ctx, state);
  out.T = Rational(state.lo) / out.scale;
  if (state.lo > 0) out.solution = std::move(state.feasible.at(state.lo));
  out.stats.add("search_setup", coord.setup);
  out.stats.add("search_lp", ctx.lp_stats);
  out.stats.add("search_broadcast", ctx.broadcast);
  return out;
}

namespace {

struct Attempt {
  PipelineAudit audit;
  ValueLedger ledger;
  Assignment assignment;
  congest::StatsLog stats;
};

Attempt round_at(const Instance& inst, const FractionalSolution& sol, std::int64_t beta, std::uint64_t seed,
                 const PipelineConfig& config) {
  Attempt a;
  PipelineAudit& audit = a.audit;
  ValueLedger& ledger = a.ledger;
  const Rational& T = sol.T;
  ledger.T = T;
  ledger.alpha = sol.alpha;
  ledger.bound = T / sol.alpha;
  ledger.reserve_needed = T / 4;
  ledger.target = T / 2;
  ledger.chosen_value = ledger.target / beta;
  ledger.min_reserve = -1;
  for (GiftId g = 0; g < inst.num_gifts(); ++g) {
    if (!sol.big[g]) ledger.max_small = std::max(ledger.max_small, inst.values[g]);
  }
  {
    const auto sv = small_value(inst, sol);
    const auto bm = big_mass(inst, sol);
    std::optional<Rational> theta;
    for (ChildId c = 0; c < inst.num_children; ++c) {
      const Rational row = sv[c] / T + bm[c];
      if (!theta || row < *theta) theta = row;
    }
    ledger.theta = theta.value_or(Rational(0));
  }

  audit.lp = audit_constraints(inst, sol);
  // Small-gift count per child with nonzero small weights.
  {
    std::vector<std::size_t> count(inst.num_children, 0);
    std::vector<Rational> max_y(inst.num_children, Rational(0)), sum_vy(inst.num_children, Rational(0));
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      const DesireEdge& e = inst.edges[i];
      if (sol.big[e.gift] || sol.w[i] == 0) continue;
      ++count[e.child];
      max_y[e.child] = std::max(max_y[e.child], sol.w[i]);
      sum_vy[e.child] += inst.values[e.gift] * sol.w[i];
    }
    for (ChildId c = 0; c < inst.num_children; ++c) {
      if (count[c] == 0) continue;
      ++audit.small_count_checked;
      if (Rational(static_cast<long>(count[c])) <= sol.alpha) ++audit.small_count_below_alpha;
      if (!(Rational(static_cast<long>(count[c])) * (T / sol.alpha) * max_y[c] > sum_vy[c])) ++audit.small_count_bound;
    }
  }
  if (audit.lp.packing() != 0) {
    audit.failure = "fractional point violates a packing row";
    return a;
  }

  EliminateResult elim = eliminate_big_cycles(inst, sol, Rng::derive(seed, 1));
  a.stats.append(elim.stats.merged(), "big_cycles_");
  FractionalSolution after = sol;
  after.w = elim.x;
  audit.eliminated = audit_constraints(inst, after);
  if (audit.eliminated.packing() != 0) {
    audit.failure = "cycle elimination broke a packing row";
    return a;
  }

  ClusterForest forest = prune_big_clusters(inst, sol.big, elim.x);
  a.stats.append(forest.stats);
  {
    std::map<GiftId, std::size_t> degree;
    for (const auto& tree : forest.trees) {
      for (std::size_t i : tree.edges) ++degree[inst.edges[i].gift];
    }
    for (const auto& [g, d] : degree) {
      if (d > 2) ++audit.degree_cap;
    }
  }
  // prune_big_clusters throws on a second lost edge within one tree.
  audit.tree_loss = 0;

  std::vector<Rational> sv(inst.num_children, Rational(0));
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (!sol.big[e.gift]) sv[e.child] += inst.values[e.gift] * forest.x[i];
  }
  for (const auto& tree : forest.trees) {
    if (!tree.deficient()) continue;
    Rational v = 0;
    for (ChildId c : tree.children) v += sv[c];
    if (ledger.min_reserve < 0 || v < ledger.min_reserve) ledger.min_reserve = v;
    if (v < ledger.reserve_needed) ++audit.reserve_short;
  }
  if (audit.degree_cap != 0) {
    audit.failure = "pruned gift of degree above 2";
    return a;
  }
  if (audit.reserve_short != 0) {
    audit.failure = "deficient tree below the small-gift reserve";
    return a;
  }

  SelectionResult sel = select_children(inst, forest, sol.big, forest.x, ledger.target, beta, Rng::derive(seed, 2),
                                        config.selection);
  a.stats.append(sel.stats);
  audit.first_max_load = sel.first_max_load;
  audit.max_load = sel.max_load;
  audit.load_capped = sel.load_capped;
  audit.clamped = sel.clamped;

  SmallRounding small = round_small_gifts(inst, sol.big, sel.z, Rng::derive(seed, 3));
  a.stats.append(small.stats.merged(), "small_");
  BigAssignment bigs = assign_big_gifts(inst, forest, sel.chosen);
  a.stats.append(bigs.stats);

  std::vector<Rational> values(inst.num_children, Rational(0));
  for (GiftId g = 0; g < inst.num_gifts(); ++g) {
    std::int64_t owner = sol.big[g] ? bigs.owner[g] : small.owner[g];
    if (sol.big[g] && small.owner[g] != kUnassigned) {
      audit.failure = "big gift rounded as small";
      return a;
    }
    if (owner < 0) continue;
    const ChildId c = static_cast<ChildId>(owner);
    if (!inst.has_edge(c, g)) {
      audit.failure = "assignment off a desire edge";
      return a;
    }
    a.assignment.push_back({g, c});
    values[c] += inst.values[g];
  }
  audit.valid = true;
  ledger.achieved = values.empty() ? Rational(0) : *std::min_element(values.begin(), values.end());
  audit.bound_met = ledger.achieved >= ledger.bound;
  if (!audit.bound_met) audit.failure = "child value below T / alpha";
  return a;
}

}  // namespace

SolveResult solve(const Instance& input, const PipelineConfig& config, ProbeCache* cache) {
  Instance inst = input;
  inst.canonicalize();
  SolveResult out;
  out.beta = config.beta > 0 ? config.beta : default_beta(inst.num_nodes(), config.beta_const);
  out.alpha = Rational(4 * out.beta);
  if (cache) cache->bind(out.alpha, config);

  const Rational scale = lcm_of_denominators(inst);
  Coordination coord = coordinate(inst, config);
  out.stats.add("search_setup", coord.setup);
  SearchState state;
  state.lo = 0;
  state.hi = floor_of(search_upper(inst) * scale);
  SearchContext ctx{inst, out.alpha, config, scale, coord, cache, out.probes};
  ctx.value_bits = bits_of(state.hi) + 1;
  run_search(ctx, state);

  // Rounds at T with fresh seeds until an attempt passes every audit.
  std::uint64_t roundings = 0;
  auto round_with_retries = [&](const FractionalSolution& sol, int& retries) -> std::optional<Attempt> {
    const std::uint64_t base = Rng::derive(config.seed, roundings++);
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      Attempt a;
      try {
        a = round_at(inst, sol, out.beta, Rng::derive(base, static_cast<std::uint64_t>(attempt)), config);
      } catch (const std::logic_error& e) {
        a.audit.failure = e.what();
      }
      if (a.audit.failure.empty()) {
        retries = attempt;
        return a;
      }
      out.failed_attempts.push_back(std::move(a.audit));
    }
    return std::nullopt;
  };

  mpz_class T_scaled = state.lo;
  std::optional<Attempt> best;
  int retries = 0;
  if (T_scaled > 0) best = round_with_retries(state.feasible.at(T_scaled), retries);
  if (T_scaled > 0 && !best) {
    // Rounding failed at the LP optimum: search below it for the largest T
    // whose probe is feasible and whose rounding passes.
    ++out.fallbacks;
    mpz_class lo = 0, hi = T_scaled - 1;
    while (lo < hi) {
      mpz_class mid = lo + hi + 1;
      mpz_fdiv_q_2exp(mid.get_mpz_t(), mid.get_mpz_t(), 1);
      FractionalSolution sol;
      std::optional<Attempt> a;
      int r = 0;
      if (probe_at(ctx, mid, sol)) {
        a = round_with_retries(sol, r);
        if (!a) ++out.fallbacks;
      }
      if (a) {
        lo = mid;
        best = std::move(a);
        retries = r;
      } else {
        hi = mid - 1;
      }
    }
    T_scaled = lo;
  }

  out.T = Rational(T_scaled) / scale;
  out.stats.add("search_lp", ctx.lp_stats);
  out.stats.add("search_broadcast", ctx.broadcast);
  if (T_scaled == 0) {
    out.value = 0;
    out.ledger.alpha = out.alpha;
    out.ledger.min_reserve = -1;
    out.audit.valid = true;
    out.audit.bound_met = true;
    return out;
  }
  out.stats.append(best->stats);
  out.retries = retries;
  out.assignment = std::move(best->assignment);
  out.value = best->ledger.achieved;
  out.ledger = std::move(best->ledger);
  out.audit = std::move(best->audit);
  return out;
}

}  // namespace santa::alloc
