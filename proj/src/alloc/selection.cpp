#include "santa/alloc/selection.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "santa/congest/primitives.hpp"

namespace santa::alloc {

std::size_t sample_coordinator(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0)) throw std::invalid_argument("sample_coordinator: total weight must be positive");
  const double r = rng.unit() * total;
  double acc = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0) continue;
    acc += weights[k];
    last = k;
    if (r < acc) return k;
  }
  return last;
}

namespace {

struct Candidate {
  std::size_t index = 0;
  double weight = 0;
};

void merge_into(Candidate& keep, const Candidate& in, Rng& rng) {
  const double total = keep.weight + in.weight;
  if (total > 0 && rng.unit() * total < in.weight) keep.index = in.index;
  keep.weight = total;
}

}  // namespace

TreeSample sample_rake_compress(std::span<const double> weights, std::span<const std::pair<std::size_t, std::size_t>> edges,
                                Rng& rng) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("sample_rake_compress: empty tree");
  if (edges.size() + 1 != n) throw std::invalid_argument("sample_rake_compress: not a tree");
  std::vector<std::set<std::size_t>> adj(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n || a == b || !adj[a].insert(b).second) {
      throw std::invalid_argument("sample_rake_compress: not a tree");
    }
    adj[b].insert(a);
  }
  std::vector<Candidate> cand(n);
  for (std::size_t v = 0; v < n; ++v) cand[v] = {v, weights[v]};
  std::vector<bool> alive(n, true);
  std::size_t remaining = n;
  TreeSample out;
  while (remaining > 1) {
    ++out.iterations;
    const std::size_t before = remaining;
    // Rake: leaves merge into their neighbor; of two adjacent leaves the
    // higher index merges.
    std::vector<std::size_t> leaves;
    for (std::size_t v = 0; v < n; ++v) {
      if (alive[v] && adj[v].size() == 1) {
        const std::size_t u = *adj[v].begin();
        if (adj[u].size() == 1 && u > v) continue;
        leaves.push_back(v);
      }
    }
    for (std::size_t v : leaves) {
      const std::size_t u = *adj[v].begin();
      merge_into(cand[u], cand[v], rng);
      adj[u].erase(v);
      adj[v].clear();
      alive[v] = false;
      --remaining;
    }
    // Compress: maximal runs of degree-2 vertices of length >= 2.
    std::vector<bool> seen(n, false);
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v] || seen[v] || adj[v].size() != 2) continue;
      std::vector<std::size_t> run{v};
      seen[v] = true;
      std::size_t ends[2];
      for (int side = 0; side < 2; ++side) {
        std::size_t prev = v;
        std::size_t cur = side == 0 ? *adj[v].begin() : *adj[v].rbegin();
        while (alive[cur] && adj[cur].size() == 2 && !seen[cur]) {
          seen[cur] = true;
          run.push_back(cur);
          const std::size_t next = *adj[cur].begin() == prev ? *adj[cur].rbegin() : *adj[cur].begin();
          prev = cur;
          cur = next;
        }
        ends[side] = cur;
      }
      if (run.size() < 2) continue;
      // A cycle cannot occur in a tree, so both ends lie outside the run.
      std::sort(run.begin(), run.end());
      const std::size_t keep = run.front();
      std::set<std::size_t> members(run.begin(), run.end());
      for (std::size_t k = 1; k < run.size(); ++k) merge_into(cand[keep], cand[run[k]], rng);
      for (std::size_t x : run) {
        for (std::size_t y : adj[x]) {
          if (!members.count(y)) adj[y].erase(x);
        }
        adj[x].clear();
      }
      for (std::size_t k = 1; k < run.size(); ++k) {
        alive[run[k]] = false;
        --remaining;
      }
      for (std::size_t e : ends) {
        adj[keep].insert(e);
        adj[e].insert(keep);
      }
      out.longest_chain = std::max<std::int64_t>(out.longest_chain, static_cast<std::int64_t>(run.size()));
    }
    if (remaining == before) throw std::logic_error("sample_rake_compress: no progress");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (alive[v]) out.index = cand[v].index;
  }
  return out;
}

SelectionResult select_children(const Instance& inst, const ClusterForest& forest, const std::vector<bool>& big,
                                const std::vector<Rational>& w, const Rational& target, std::int64_t beta,
                                std::uint64_t seed, const SelectionConfig& config) {
  if (beta < 1) throw std::invalid_argument("select_children: beta must be positive");
  SelectionResult out;
  out.small_value.assign(inst.num_children, Rational(0));
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const DesireEdge& e = inst.edges[i];
    if (!big[e.gift]) out.small_value[e.child] += inst.values[e.gift] * w[i];
  }
  out.tree_value.assign(forest.trees.size(), Rational(0));
  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    for (ChildId c : forest.trees[t].children) out.tree_value[t] += out.small_value[c];
    if (forest.trees[t].deficient() && out.tree_value[t] == 0) {
      throw std::logic_error("select_children: deficient tree without small-gift value");
    }
  }

  // Virtual child tree of each deficient tree: children sharing a gift.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> vedges(forest.trees.size());
  {
    std::map<GiftId, std::vector<ChildId>> holders;
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
      if (!forest.trees[t].deficient()) continue;
      holders.clear();
      for (std::size_t i : forest.trees[t].edges) holders[inst.edges[i].gift].push_back(inst.edges[i].child);
      const auto& kids = forest.trees[t].children;
      auto local = [&](ChildId c) {
        return static_cast<std::size_t>(std::lower_bound(kids.begin(), kids.end(), c) - kids.begin());
      };
      for (const auto& [g, cs] : holders) {
        if (cs.size() != 2) throw std::logic_error("select_children: deficient tree has a gift leaf");
        vedges[t].push_back({local(cs[0]), local(cs[1])});
      }
    }
  }

  const std::uint32_t id_bits = congest::ceil_log2(std::max<std::size_t>(inst.num_nodes(), 2));
  const std::uint32_t budget = 8 * id_bits;
  const std::uint32_t msg_bits = id_bits + 64;
  const std::int64_t hop = congest::fragments_for(msg_bits, budget);

  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    const std::uint64_t draw_seed = attempt == 0 ? seed : Rng::derive(seed, 0x5e1ec7ULL + attempt);
    std::vector<std::optional<ChildId>> chosen(forest.trees.size());
    std::int64_t rounds = 0, messages = 0, iterations = 0;
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
      const ClusterTree& tree = forest.trees[t];
      if (!tree.deficient()) continue;
      std::vector<double> weights;
      for (ChildId c : tree.children) weights.push_back(out.small_value[c].get_d());
      Rng rng(Rng::derive(draw_seed, tree.children.front()));
      const std::size_t vertices = tree.children.size() + tree.gifts.size();
      const bool coordinator = config.mode == SamplingMode::kCoordinator ||
                               (config.mode == SamplingMode::kAuto && vertices < config.coordinator_threshold);
      std::int64_t tree_rounds = 0;
      if (coordinator) {
        chosen[t] = tree.children[sample_coordinator(weights, rng)];
        // Gather and announce over a path of at most `vertices` nodes, pipelined.
        tree_rounds = 2 * (static_cast<std::int64_t>(vertices) - 1) * hop + static_cast<std::int64_t>(tree.children.size());
        messages += 4 * static_cast<std::int64_t>(tree.edges.size()) + 2 * static_cast<std::int64_t>(tree.children.size());
      } else {
        const TreeSample s = sample_rake_compress(weights, vedges[t], rng);
        chosen[t] = tree.children[s.index];
        iterations += s.iterations;
        const std::int64_t jump = congest::ceil_log2(static_cast<std::size_t>(std::max<std::int64_t>(s.longest_chain, 2)));
        // Each virtual hop crosses a gift; the draw is unrolled top-down.
        tree_rounds = 2 * 2 * s.iterations * (1 + jump) * hop;
        messages += 4 * static_cast<std::int64_t>(tree.edges.size()) * s.iterations;
      }
      rounds = std::max(rounds, tree_rounds);
    }

    std::vector<Rational> z(inst.edges.size(), Rational(0));
    std::vector<Rational> load(inst.num_gifts(), Rational(0));
    std::size_t clamped = 0;
    std::vector<bool> is_chosen(inst.num_children, false);
    for (const auto& c : chosen) {
      if (c) is_chosen[*c] = true;
    }
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      const DesireEdge& e = inst.edges[i];
      if (big[e.gift] || !is_chosen[e.child] || w[i] == 0) continue;
      z[i] = w[i] * target / (out.small_value[e.child] * Rational(beta));
      if (z[i] > 1) {
        z[i] = 1;
        ++clamped;
      }
      load[e.gift] += z[i];
    }
    Rational max_load = 0;
    for (const auto& l : load) max_load = std::max(max_load, l);

    congest::RoundStats st;
    st.rounds_elapsed = rounds + 2 * hop;  // final load check with the gift's neighbors
    st.total_messages = messages + 2 * static_cast<std::int64_t>(inst.edges.size());
    st.max_bits_on_any_edge_per_round = std::min<std::int64_t>(msg_bits, budget);
    out.stats.add(attempt == 0 ? "select" : "select_retry", st);
    out.sampling_iterations += iterations;
    out.attempts = attempt + 1;
    if (attempt == 0) out.first_max_load = max_load;
    const bool better = attempt == 0 || max_load < out.max_load;
    if (better) {
      out.chosen = std::move(chosen);
      out.z = std::move(z);
      out.max_load = max_load;
      out.clamped = clamped;
    }
    if (out.max_load <= 1) return out;
  }
  out.load_capped = true;
  const Rational scale = 1 / out.max_load;
  for (auto& v : out.z) v *= scale;
  out.max_load = 1;
  return out;
}

}  // namespace santa::alloc
