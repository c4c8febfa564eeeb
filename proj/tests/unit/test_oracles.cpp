#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "doctest.h"
#include "santa/alloc/instance.hpp"
#include "santa/oracles/brute_force.hpp"
#include "santa/oracles/generators.hpp"
#include "santa/oracles/verify.hpp"

using namespace santa;
using namespace santa::alloc;
using namespace santa::oracles;

namespace {

Instance make(std::size_t children, std::vector<Rational> values, std::vector<DesireEdge> edges) {
  Instance inst;
  inst.num_children = children;
  inst.values = std::move(values);
  inst.edges = std::move(edges);
  inst.canonicalize();
  return inst;
}

std::int64_t diameter(const Instance& inst) {
  const std::size_t n = inst.num_nodes();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : inst.network_edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::int64_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::int64_t> d(n, -1);
    std::deque<std::size_t> q{s};
    d[s] = 0;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop_front();
      for (auto w : adj[v]) {
        if (d[w] < 0) {
          d[w] = d[v] + 1;
          q.push_back(w);
        }
      }
    }
    for (auto x : d) {
      REQUIRE(x >= 0);
      best = std::max(best, x);
    }
  }
  return best;
}

std::string bits(std::uint64_t mask, std::size_t s) {
  std::string out;
  for (std::size_t i = 0; i < s; ++i) out.push_back((mask >> i & 1u) ? '1' : '0');
  return out;
}

}  // namespace

TEST_CASE("brute force small examples") {
  CHECK(brute_force_opt(make(1, {5}, {{0, 0}})).value == 5);
  // Two children share one gift.
  CHECK(brute_force_opt(make(2, {1}, {{0, 0}, {1, 0}})).value == 0);
  // Child without edges.
  CHECK(brute_force_opt(make(2, {3, 4}, {{0, 0}, {0, 1}})).value == 0);
  const auto r = brute_force_opt(make(2, {Rational(1, 2), Rational(1, 3), 1}, {{0, 0}, {0, 1}, {1, 2}, {0, 2}}));
  CHECK(r.value == Rational(5, 6));
}

TEST_CASE("brute force matches naive enumeration") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    Rng rng(seed);
    RandomSpec spec;
    spec.children = 1 + rng.below(4);
    spec.gifts = rng.below(9);
    spec.value_lo = 0;
    spec.value_hi = 9;
    spec.density = 0.3 + 0.5 * rng.unit();
    spec.seed = seed;
    const Instance inst = gen_random(spec);
    const auto bf = brute_force_opt(inst);
    CHECK(bf.value == naive_opt(inst));
    const auto check = verify_assignment(inst, bf.witness);
    CHECK(check.valid);
    CHECK(check.min_value == bf.value);
  }
}

TEST_CASE("brute force caps") {
  RandomSpec spec;
  spec.children = 13;
  spec.gifts = 17;
  CHECK_THROWS_AS(brute_force_opt(gen_random(spec)), std::invalid_argument);
  spec.children = 12;
  CHECK_NOTHROW(brute_force_opt(gen_random(spec)));
}

TEST_CASE("path instances") {
  for (std::size_t n = 1; n <= 8; ++n) {
    CHECK(brute_force_opt(gen_path(PathVariant::kI1, n)).value == 0);
    CHECK(brute_force_opt(gen_path(PathVariant::kI2, n)).value == 1);
    CHECK(brute_force_opt(gen_path(PathVariant::kI3, n)).value == 1);
  }
  SUBCASE("I2 assignment figure: every gift to its right child, the extra gift to the first") {
    const std::size_t n = 6;
    const Instance inst = gen_path(PathVariant::kI2, n);
    Assignment a;
    for (GiftId j = 0; j + 1 < n; ++j) a.push_back({j, j + 1});
    a.push_back({static_cast<GiftId>(n - 1), 0});
    const auto v = verify_assignment(inst, a);
    CHECK(v.valid);
    CHECK(v.min_value == 1);
  }
  SUBCASE("I3 is the mirror image") {
    const std::size_t n = 5;
    const Instance inst = gen_path(PathVariant::kI3, n);
    Assignment a;
    for (GiftId j = 0; j + 1 < n; ++j) a.push_back({j, j});
    a.push_back({static_cast<GiftId>(n - 1), static_cast<ChildId>(n - 1)});
    CHECK(verify_assignment(inst, a).min_value == 1);
  }
}

TEST_CASE("SC_n construction") {
  SUBCASE("node counts and logarithmic diameter") {
    for (std::size_t s : {1u, 2u, 3u, 4u, 5u, 8u, 16u}) {
      ScnLayout layout;
      const Instance inst = gen_scn(s * s, std::string(s, '1'), std::string(s, '0'), &layout);
      std::size_t leaves = 1, levels = 1;
      while (leaves < s) {
        leaves *= 2;
        ++levels;
      }
      std::size_t tree_children = 0, tree_gifts = 0;
      for (std::size_t l = 0, width = leaves; l < levels; ++l, width /= 2) (l % 2 == 0 ? tree_children : tree_gifts) += width;
      CHECK(inst.num_children == s * s + tree_children + 2);
      CHECK(inst.num_gifts() == s * (s - 1) + tree_gifts + tree_children + 2 + 2 * s);
      CHECK(layout.leaves == leaves);
      if (s >= 2) CHECK(diameter(inst) <= 4 * static_cast<std::int64_t>(levels) + 8);
    }
  }
  SUBCASE("value decides disjointness") {
    BruteForceLimits limits;
    limits.max_gifts = 64;
    CHECK(brute_force_opt(gen_scn(16, "1111", "0000"), limits).value == 1);
    CHECK(brute_force_opt(gen_scn(16, "0000", "0000"), limits).value == 0);
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
      const auto a = rng.below(16), b = rng.below(16);
      const bool disjoint = ((~a & ~b) & 15u) == 0;
      CHECK(brute_force_opt(gen_scn(16, bits(a, 4), bits(b, 4)), limits).value == (disjoint ? 1 : 0));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(gen_scn(15, "111", "111"), std::invalid_argument);
    CHECK_THROWS_AS(gen_scn(16, "111", "1111"), std::invalid_argument);
    CHECK_THROWS_AS(gen_scn(16, "11x1", "1111"), std::invalid_argument);
  }
}

TEST_CASE("sparsification example") {
  for (auto [k, T] : {std::pair<std::size_t, std::int64_t>{2, 4}, {3, 6}}) {
    const auto doc = gen_sparsification_example(k, T);
    CHECK(brute_force_opt(doc.instance).value == T);
    CHECK(brute_force_opt(restrict_to_support(doc)).value == T / static_cast<std::int64_t>(k));
    // Fractional value: every child receives T in total.
    std::vector<Rational> got(k, Rational(0)), big(k, Rational(0));
    for (const auto& f : doc.fractional) {
      got[f.child] += f.weight * doc.instance.values[f.gift];
      if (doc.instance.values[f.gift] == T) big[f.child] += f.weight;
    }
    for (std::size_t c = 0; c < k; ++c) {
      CHECK(got[c] == T);
      CHECK(big[c] == Rational(static_cast<long>(k - 1), static_cast<long>(k)));
    }
  }
  CHECK_THROWS_AS(gen_sparsification_example(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(gen_sparsification_example(3, 2), std::invalid_argument);
}

TEST_CASE("random generator") {
  RandomSpec spec;
  spec.children = 7;
  spec.gifts = 9;
  spec.seed = 42;
  std::ostringstream a, b;
  write_instance(a, gen_random(spec));
  write_instance(b, gen_random(spec));
  CHECK(a.str() == b.str());
  spec.density = 1;
  CHECK(gen_random(spec).edges.size() == 63);
  spec.density = 0.3;
  double total = 0;
  const int runs = 400;
  for (int s = 0; s < runs; ++s) {
    spec.seed = static_cast<std::uint64_t>(s);
    total += static_cast<double>(gen_random(spec).edges.size());
  }
  const double mean = total / runs;
  const double sd = std::sqrt(63 * 0.3 * 0.7 / runs);
  CHECK(std::abs(mean - 63 * 0.3) <= 4 * sd);
}

TEST_CASE("verify_assignment") {
  const Instance inst = make(2, {3, 4, 5}, {{0, 0}, {0, 1}, {1, 1}, {1, 2}});
  auto ok = verify_assignment(inst, {{0, 0}, {1, 0}, {2, 1}});
  CHECK(ok.valid);
  CHECK(ok.min_value == 5);
  CHECK(ok.child_values == std::vector<Rational>{7, 5});
  CHECK_FALSE(verify_assignment(inst, {{0, 0}, {0, 0}}).valid);
  CHECK_FALSE(verify_assignment(inst, {{2, 0}}).valid);
  CHECK_FALSE(verify_assignment(inst, {{7, 0}}).valid);
  CHECK_FALSE(verify_assignment(inst, {{0, 9}}).valid);
  CHECK(verify_assignment(inst, {}).min_value == 0);

  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RandomSpec spec;
    spec.children = 5;
    spec.gifts = 10;
    spec.seed = seed;
    const Instance r = gen_random(spec);
    Rng rng(seed + 7);
    Assignment a;
    std::vector<Rational> sums(5, Rational(0));
    for (const auto& e : r.edges) {
      if (rng.below(3) == 0 && std::none_of(a.begin(), a.end(), [&](const auto& x) { return x.gift == e.gift; })) {
        a.push_back({e.gift, e.child});
        sums[e.child] += r.values[e.gift];
      }
    }
    const auto v = verify_assignment(r, a);
    CHECK(v.valid);
    CHECK(v.child_values == sums);
  }
}

TEST_CASE("instance and assignment files") {
  const auto doc = gen_sparsification_example(3, 6);
  std::ostringstream out;
  write_instance(out, doc.instance, doc.fractional);
  std::istringstream in(out.str());
  const auto back = read_instance(in);
  CHECK(back.instance.values == doc.instance.values);
  CHECK(back.instance.edges == doc.instance.edges);
  REQUIRE(back.fractional.size() == doc.fractional.size());
  for (std::size_t i = 0; i < back.fractional.size(); ++i) CHECK(back.fractional[i].weight == doc.fractional[i].weight);

  std::istringstream rational_values("# comment\nsanta 1 2\ngift 0 7/2\ngift 1 2.5\nedge 0 0\nedge 0 1 # trailing\n");
  const auto parsed = read_instance(rational_values);
  CHECK(parsed.instance.values == std::vector<Rational>{Rational(7, 2), Rational(5, 2)});

  auto error_line = [](const std::string& text) {
    std::istringstream s(text);
    try {
      read_instance(s);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(error_line("santa 1 1\ngift 0 1\nedge 0 3\n").rfind("line 3", 0) == 0);
  CHECK(error_line("gift 0 1\n").rfind("line 1", 0) == 0);
  CHECK(error_line("santa 1 1\ngift 0 -1\n").rfind("line 2", 0) == 0);
  CHECK(error_line("santa 1 1\ngift 0 1\nfrac 0 0 1/2\n") != "no error");
  CHECK(error_line("santa 1 2\ngift 0 1\n") != "no error");
  CHECK(error_line("santa 1 1\ngift 0 1\nedge 0 0\nedge 0 0\n") != "no error");

  std::istringstream assignment("0 1\n# c\n\n2 0\n");
  CHECK(read_assignment(assignment) == Assignment{{0, 1}, {2, 0}});
  std::istringstream bad("0 x\n");
  CHECK_THROWS_AS(read_assignment(bad), std::runtime_error);
}

TEST_CASE("mixed generator") {
  MixedSpec spec;
  spec.children = 5;
  spec.big = 3;
  spec.small = 12;
  spec.small_degree = 3;
  spec.big_value = 40;
  spec.seed = 8;
  const Instance inst = gen_mixed(spec);
  CHECK(inst.num_children == 5);
  REQUIRE(inst.num_gifts() == 15);
  const auto holders = inst.children_of_gift();
  for (GiftId g = 0; g < 15; ++g) {
    CHECK(inst.values[g] == (g < 3 ? 40 : 1));
    CHECK(holders[g].size() == (g < 3 ? 2u : 3u));
  }
  std::ostringstream a, b;
  write_instance(a, inst);
  write_instance(b, gen_mixed(spec));
  CHECK(a.str() == b.str());
  spec.small_degree = 6;
  CHECK_THROWS_AS(gen_mixed(spec), std::invalid_argument);
  spec.small_degree = 2;
  spec.children = 1;
  CHECK_THROWS_AS(gen_mixed(spec), std::invalid_argument);
}
