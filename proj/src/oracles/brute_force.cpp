#include "santa/oracles/brute_force.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace santa::oracles {

using alloc::ChildId;
using alloc::GiftId;
using alloc::Instance;

namespace {

// Gift values scaled to integers by the common denominator.
struct Scaled {
  std::vector<std::int64_t> value;
  mpz_class denominator = 1;
};

Scaled scale_values(const Instance& inst) {
  Scaled s;
  for (const Rational& v : inst.values) mpz_lcm(s.denominator.get_mpz_t(), s.denominator.get_mpz_t(), v.get_den_mpz_t());
  mpz_class total = 0;
  for (const Rational& v : inst.values) {
    const mpz_class k = v.get_num() * (s.denominator / v.get_den());
    total += k;
    s.value.push_back(0);
    if (!k.fits_slong_p()) throw std::invalid_argument("brute_force_opt: scaled values overflow");
    s.value.back() = k.get_si();
  }
  if (!total.fits_slong_p() || total > mpz_class(std::numeric_limits<std::int64_t>::max() / 4)) {
    throw std::invalid_argument("brute_force_opt: scaled values overflow");
  }
  return s;
}

struct StateHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

class Search {
 public:
  Search(const Instance& inst, const Scaled& scaled, std::uint64_t budget)
      : inst_(inst), value_(scaled.value), budget_(budget) {
    order_.resize(inst.num_gifts());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](GiftId a, GiftId b) { return value_[a] > value_[b]; });
    // Zero-value gifts never help.
    while (!order_.empty() && value_[order_.back()] == 0) order_.pop_back();
    wanted_by_ = inst.children_of_gift();
    // suffix[k][c] = value still available to c from gifts order_[k..].
    suffix_.assign(order_.size() + 1, std::vector<std::int64_t>(inst.num_children, 0));
    for (std::size_t k = order_.size(); k-- > 0;) {
      suffix_[k] = suffix_[k + 1];
      for (ChildId c : wanted_by_[order_[k]]) suffix_[k][c] += value_[order_[k]];
    }
  }

  std::int64_t upper_bound() const {
    return inst_.num_children == 0 ? 0 : *std::min_element(suffix_[0].begin(), suffix_[0].end());
  }

  // Some assignment gives every child at least target.
  bool decide(std::int64_t target, std::vector<std::int64_t>& owner) {
    failed_.clear();
    need_.assign(inst_.num_children, target);
    owner_.assign(inst_.num_gifts(), -1);
    if (!dfs(0)) return false;
    owner = owner_;
    return true;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  bool dfs(std::size_t k) {
    if (++nodes_ > budget_) throw std::runtime_error("brute_force_opt: node budget exhausted");
    bool done = true;
    for (ChildId c = 0; c < need_.size(); ++c) {
      if (need_[c] > suffix_[k][c]) return false;
      if (need_[c] > 0) done = false;
    }
    if (done) return true;
    if (k == order_.size()) return false;
    std::vector<std::int64_t> key(need_);
    key.push_back(static_cast<std::int64_t>(k));
    if (failed_.count(key) != 0) return false;

    const GiftId g = order_[k];
    // Unsatisfied desirers, neediest first, then leaving the gift out.
    std::vector<ChildId> takers;
    for (ChildId c : wanted_by_[g]) {
      if (need_[c] > 0) takers.push_back(c);
    }
    std::sort(takers.begin(), takers.end(), [&](ChildId a, ChildId b) {
      return need_[a] != need_[b] ? need_[a] > need_[b] : a < b;
    });
    for (ChildId c : takers) {
      const std::int64_t before = need_[c];
      need_[c] = std::max<std::int64_t>(0, before - value_[g]);
      owner_[g] = c;
      if (dfs(k + 1)) return true;
      owner_[g] = -1;
      need_[c] = before;
    }
    if (dfs(k + 1)) return true;
    failed_.insert(std::move(key));
    return false;
  }

  const Instance& inst_;
  const std::vector<std::int64_t>& value_;
  std::uint64_t budget_;
  std::vector<GiftId> order_;
  std::vector<std::vector<ChildId>> wanted_by_;
  std::vector<std::vector<std::int64_t>> suffix_;
  std::vector<std::int64_t> need_;
  std::vector<std::int64_t> owner_;
  std::unordered_set<std::vector<std::int64_t>, StateHash> failed_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

BruteForceResult brute_force_opt(const Instance& inst, const BruteForceLimits& limits) {
  if (inst.num_gifts() > limits.max_gifts && inst.num_children > limits.max_children) {
    throw std::invalid_argument("brute_force_opt: instance exceeds both the gift and the child cap; use sampling");
  }
  const Scaled scaled = scale_values(inst);
  Search search(inst, scaled, limits.node_budget);
  BruteForceResult out;
  std::vector<std::int64_t> owner(inst.num_gifts(), -1);
  std::int64_t best = 0;
  const std::int64_t ub = search.upper_bound();
  // Each success raises the incumbent to the witness's minimum.
  while (best < ub) {
    std::vector<std::int64_t> next;
    if (!search.decide(best + 1, next)) break;
    std::vector<std::int64_t> load(inst.num_children, 0);
    for (GiftId g = 0; g < next.size(); ++g) {
      if (next[g] >= 0) load[static_cast<std::size_t>(next[g])] += scaled.value[g];
    }
    best = *std::min_element(load.begin(), load.end());
    owner = std::move(next);
  }
  out.nodes = search.nodes();
  out.value = Rational(mpz_class(static_cast<long>(best)), scaled.denominator);
  out.value.canonicalize();
  for (GiftId g = 0; g < owner.size(); ++g) {
    if (owner[g] >= 0) out.witness.push_back({g, static_cast<ChildId>(owner[g])});
  }
  return out;
}

Rational naive_opt(const Instance& inst) {
  const auto wanted = inst.children_of_gift();
  const std::size_t m = inst.num_gifts();
  std::vector<std::size_t> choice(m, 0);  // 0 = unassigned, else index + 1 into wanted[g]
  Rational best = -1;
  while (true) {
    std::vector<Rational> load(inst.num_children, Rational(0));
    for (std::size_t g = 0; g < m; ++g) {
      if (choice[g] > 0) load[wanted[g][choice[g] - 1]] += inst.values[g];
    }
    best = std::max(best, *std::min_element(load.begin(), load.end()));
    std::size_t g = 0;
    while (g < m && choice[g] == wanted[g].size()) choice[g++] = 0;
    if (g == m) break;
    ++choice[g];
  }
  return best;
}

}  // namespace santa::oracles
