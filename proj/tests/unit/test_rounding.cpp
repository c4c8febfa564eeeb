#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "graph_fixtures.hpp"
#include "rounding_fixtures.hpp"
#include "santa/rounding/cycle_decompose.hpp"
#include "santa/rounding/cycle_rounding.hpp"
#include "santa/rounding/ldd.hpp"
#include "santa/rounding/t_join.hpp"

using namespace santa;
using namespace santa::rounding;

namespace {

bool acyclic(std::size_t n, const std::vector<Edge>& edges, const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (std::size_t i : subset) {
    const auto a = find(edges[i].u), b = find(edges[i].v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

bool parity_ok(std::size_t n, const std::vector<Edge>& edges, const std::vector<std::size_t>& subset,
               const std::vector<NodeId>& terminals) {
  std::vector<int> deg(n, 0), want(n, 0);
  for (std::size_t i : subset) {
    deg[edges[i].u] ^= 1;
    deg[edges[i].v] ^= 1;
  }
  for (NodeId t : terminals) want[t] = 1;
  return deg == want;
}

// All acyclic T-joins by subset enumeration.
std::vector<std::vector<std::size_t>> acyclic_joins(std::size_t n, const std::vector<Edge>& edges,
                                                    const std::vector<NodeId>& terminals) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (mask >> i & 1u) subset.push_back(i);
    }
    if (parity_ok(n, edges, subset, terminals) && acyclic(n, edges, subset)) out.push_back(subset);
  }
  return out;
}

std::vector<double> as_double(const std::vector<Rational>& w) {
  std::vector<double> out;
  for (const auto& x : w) out.push_back(x.get_d());
  return out;
}

}  // namespace

TEST_CASE("t_join on small examples matches the unique acyclic join") {
  SUBCASE("empty terminal set") {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 0}};
    CHECK(t_join(3, edges, std::vector<NodeId>{}).edges.empty());
  }
  SUBCASE("path a-b-c") {
    const std::vector<Edge> edges{{0, 1}, {1, 2}};
    const std::vector<NodeId> t{0, 2};
    const auto oracle = acyclic_joins(3, edges, t);
    REQUIRE(oracle.size() == 1);
    CHECK(t_join(3, edges, t).edges == oracle[0]);
    CHECK(oracle[0] == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("star with two terminal leaves") {
    const std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}};
    const std::vector<NodeId> t{1, 2};
    const auto oracle = acyclic_joins(4, edges, t);
    REQUIRE(oracle.size() == 1);
    CHECK(t_join(4, edges, t).edges == oracle[0]);
    CHECK(oracle[0] == std::vector<std::size_t>{0, 1});
  }
}

TEST_CASE("t_join rejects odd terminal counts") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {3, 4}};
  CHECK_THROWS_AS(t_join(5, edges, std::vector<NodeId>{0}), std::invalid_argument);
  CHECK_THROWS_AS(t_join(5, edges, std::vector<NodeId>{0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(t_join(5, edges, std::vector<NodeId>{0, 0}), std::invalid_argument);
  CHECK(t_join(5, edges, std::vector<NodeId>{0, 2, 3, 4}).edges == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("t_join agrees with exhaustive search on graphs with at most 12 edges") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.below(7);
    auto edges = fixtures::random_connected(n, rng.below(8), seed);
    if (edges.size() > 12) edges.resize(12);
    std::vector<NodeId> terminals;
    for (NodeId v = 0; v < n; ++v) {
      if (rng.below(2) == 1) terminals.push_back(v);
    }
    const auto oracle = acyclic_joins(n, edges, terminals);
    // Connectivity can be lost by truncation; the component parity rule then decides.
    bool solvable = !oracle.empty();
    try {
      const TJoin got = t_join(n, edges, terminals);
      CHECK(solvable);
      CHECK(parity_ok(n, edges, got.edges, terminals));
      CHECK(acyclic(n, edges, got.edges));
      CHECK(std::find(oracle.begin(), oracle.end(), got.edges) != oracle.end());
    } catch (const std::invalid_argument&) {
      CHECK_FALSE(solvable);
    }
  }
}

TEST_CASE("cycle_decompose examples") {
  SUBCASE("empty") { CHECK(cycle_decompose(3, std::vector<Edge>{}).empty()); }
  SUBCASE("single C4") {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    const auto cycles = cycle_decompose(4, edges);
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0].edges.size() == 4);
  }
  SUBCASE("figure eight") {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}};
    const auto cycles = cycle_decompose(5, edges);
    REQUIRE(cycles.size() == 2);
    CHECK(cycles[0].edges.size() == 3);
    CHECK(cycles[1].edges.size() == 3);
  }
  SUBCASE("parallel pair") {
    const std::vector<Edge> edges{{0, 1}, {1, 0}};
    const auto cycles = cycle_decompose(2, edges);
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0].edges.size() == 2);
  }
  SUBCASE("odd degree") {
    const std::vector<Edge> edges{{0, 1}, {1, 2}};
    CHECK_THROWS_AS(cycle_decompose(3, edges), std::invalid_argument);
  }
}

TEST_CASE("cycle_decompose partitions random Eulerian multigraphs into simple cycles") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 3 + rng.below(12);
    std::vector<Edge> edges;
    // Union of random closed walks has all degrees even.
    for (int walk = 0; walk < 3; ++walk) {
      const std::size_t len = 3 + rng.below(6);
      std::vector<NodeId> vs;
      for (std::size_t k = 0; k < len; ++k) {
        NodeId v;
        do {
          v = static_cast<NodeId>(rng.below(n));
        } while (!vs.empty() && v == vs.back());
        vs.push_back(v);
      }
      if (vs.back() == vs.front()) vs.pop_back();
      if (vs.size() < 2) continue;
      for (std::size_t k = 0; k < vs.size(); ++k) edges.push_back({vs[k], vs[(k + 1) % vs.size()]});
    }
    const auto cycles = cycle_decompose(n, edges);
    std::vector<int> hits(edges.size(), 0);
    for (const Cycle& c : cycles) {
      REQUIRE(c.vertices.size() == c.edges.size());
      std::set<NodeId> distinct(c.vertices.begin(), c.vertices.end());
      CHECK(distinct.size() == c.vertices.size());
      for (std::size_t k = 0; k < c.edges.size(); ++k) {
        ++hits[c.edges[k]];
        const Edge& e = edges[c.edges[k]];
        const NodeId a = c.vertices[k], b = c.vertices[(k + 1) % c.vertices.size()];
        CHECK(((e.u == a && e.v == b) || (e.u == b && e.v == a)));
      }
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST_CASE("ldd clusters are connected and the cut is small") {
  SUBCASE("clique is one cluster") {
    std::vector<Edge> edges;
    for (NodeId a = 0; a < 8; ++a) {
      for (NodeId b = a + 1; b < 8; ++b) edges.push_back({a, b});
    }
    const auto c = ldd(8, edges, 5);
    CHECK(c.centers.size() == 1);
    CHECK(c.inter_cluster_edges.empty());
  }
  SUBCASE("path splits with about beta n cut edges") {
    const std::size_t n = 200;
    std::vector<Edge> edges;
    for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    LddConfig cfg;
    cfg.max_attempts = 1;
    double total = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
      const auto c = ldd(n, edges, static_cast<std::uint64_t>(s), cfg);
      total += c.cut_fraction(edges.size());
      // Clusters on a path are intervals.
      for (NodeId v = 0; v + 2 < n; ++v) {
        if (c.cluster_of[v] == c.cluster_of[v + 2]) CHECK(c.cluster_of[v + 1] == c.cluster_of[v]);
      }
    }
    const double mean = total / seeds;
    CHECK(mean > 0.02);
    CHECK(mean <= 0.1);
  }
  SUBCASE("random graphs: connected clusters, radius bound, retry limit") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const std::size_t n = 60;
      const auto edges = fixtures::random_connected(n, 20, seed);
      const auto c = ldd(n, edges, seed);
      for (std::size_t k = 0; k < c.centers.size(); ++k) {
        std::vector<Edge> inside;
        for (const Edge& e : edges) {
          if (c.cluster_of[e.u] == static_cast<std::int64_t>(k) && c.cluster_of[e.v] == static_cast<std::int64_t>(k)) {
            inside.push_back(e);
          }
        }
        const auto d = fixtures::distances(n, inside, c.centers[k]);
        for (NodeId v = 0; v < n; ++v) {
          if (c.cluster_of[v] != static_cast<std::int64_t>(k)) continue;
          CHECK(d[v] >= 0);
          CHECK(d[v] <= c.radius[k]);
        }
      }
      CHECK(c.attempts <= 16);
    }
  }
}

TEST_CASE("round_single_cycle examples") {
  const std::vector<Edge> c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const std::vector<std::size_t> order{0, 1, 2, 3};
  const std::vector<Rational> ones(4, Rational(1));
  SUBCASE("decrease-first orientation") {
    std::vector<Rational> w{Rational(3, 10), Rational(6, 10), Rational(3, 10), Rational(6, 10)};
    const Rational delta = round_single_cycle<Rational>(c4, order, w, ones, CycleOrientation::kDecreaseFirst);
    CHECK(delta == Rational(3, 10));
    CHECK(w == std::vector<Rational>{0, Rational(9, 10), 0, Rational(9, 10)});
  }
  SUBCASE("larger step") {
    std::vector<Rational> w{Rational(3, 10), Rational(6, 10), Rational(3, 10), Rational(6, 10)};
    const Rational delta = round_single_cycle<Rational>(c4, order, w, ones);
    CHECK(delta == Rational(6, 10));
    CHECK(w == std::vector<Rational>{Rational(9, 10), 0, Rational(9, 10), 0});
  }
  SUBCASE("tie raises the lowest edge") {
    std::vector<Rational> w(4, Rational(1, 2));
    round_single_cycle<Rational>(c4, order, w, ones);
    CHECK(w == std::vector<Rational>{1, 0, 1, 0});
  }
  SUBCASE("float mode conserves sums") {
    std::vector<double> w{0.3, 0.6, 0.3, 0.6};
    const std::vector<double> caps(4, 1.0);
    round_single_cycle<double>(c4, order, w, caps, CycleOrientation::kDecreaseFirst);
    CHECK(w[0] == 0.0);
    CHECK(w[1] == doctest::Approx(0.9));
    CHECK(w[0] + w[1] == doctest::Approx(0.9));
  }
  SUBCASE("value-weighted caps") {
    std::vector<Rational> w{2, 1, 3, 4};
    const std::vector<Rational> caps{5, 2, 6, 8};
    const auto before = fixtures::vertex_sums<Rational>(4, c4, w);
    round_single_cycle<Rational>(c4, order, w, caps);
    CHECK(fixtures::vertex_sums<Rational>(4, c4, w) == before);
    int integral = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(w[i] >= 0);
      CHECK(w[i] <= caps[i]);
      integral += (w[i] == 0 || w[i] == caps[i]) ? 1 : 0;
    }
    CHECK(integral >= 1);
  }
  SUBCASE("contract violations") {
    std::vector<Rational> w{0, Rational(1, 2), Rational(1, 2), Rational(1, 2)};
    CHECK_THROWS_AS(round_single_cycle<Rational>(c4, order, w, ones), std::invalid_argument);
    const std::vector<Edge> c3{{0, 1}, {1, 2}, {2, 0}};
    std::vector<Rational> w3(3, Rational(1, 2));
    const std::vector<Rational> ones3(3, Rational(1));
    CHECK_THROWS_AS(round_single_cycle<Rational>(c3, std::vector<std::size_t>{0, 1, 2}, w3, ones3),
                    std::invalid_argument);
    std::vector<Rational> half(4, Rational(1, 2));
    CHECK_THROWS_AS(round_single_cycle<Rational>(c4, std::vector<std::size_t>{0, 2, 1, 3}, half, ones),
                    std::invalid_argument);
  }
}

TEST_CASE("round_cycles examples") {
  SUBCASE("C4 of halves") {
    const std::vector<Edge> c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    const auto r = round_cycles<Rational>(4, c4, std::vector<Rational>(4, Rational(1, 2)));
    const bool a = r.w == std::vector<Rational>{1, 0, 1, 0};
    const bool b = r.w == std::vector<Rational>{0, 1, 0, 1};
    CHECK((a || b));
    for (const auto& s : fixtures::vertex_sums<Rational>(4, c4, r.w)) CHECK(s == 1);
  }
  SUBCASE("tree input is unchanged") {
    const std::vector<Edge> tree{{0, 3}, {1, 3}, {1, 4}, {2, 4}};
    const std::vector<Rational> w{Rational(1, 3), Rational(1, 2), Rational(1, 4), Rational(2, 3)};
    const auto r = round_cycles<Rational>(5, tree, w);
    CHECK(r.w == w);
    CHECK(r.iterations.empty());
  }
  SUBCASE("input errors") {
    const std::vector<Edge> c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    CHECK_THROWS_AS(round_cycles<Rational>(4, c4, std::vector<Rational>{2, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(round_cycles<double>(4, c4, std::vector<double>{-0.1, 0, 0, 0}), std::invalid_argument);
    const std::vector<Edge> c3{{0, 1}, {1, 2}, {2, 0}};
    CHECK_THROWS_AS(round_cycles<Rational>(3, c3, std::vector<Rational>(3, Rational(1, 2))), std::invalid_argument);
    const std::vector<Edge> parallel{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(round_cycles<Rational>(2, parallel, std::vector<Rational>(2, Rational(1, 2))),
                    std::invalid_argument);
  }
}

TEST_CASE("round_cycles conserves vertex sums and leaves a fractional forest") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng(seed);
    const std::size_t left = 2 + rng.below(30), right = 2 + rng.below(30);
    const double density = std::array{0.05, 0.2, 0.5}[seed % 3];
    const auto g = fixtures::random_bipartite(left, right, density, seed);
    RoundingConfig cfg;
    cfg.seed = seed;

    const auto exact = round_cycles<Rational>(g.n, g.edges, g.w, cfg);
    CHECK(fixtures::vertex_sums<Rational>(g.n, g.edges, exact.w) == fixtures::vertex_sums<Rational>(g.n, g.edges, g.w));
    const std::vector<Rational> ones(g.edges.size(), Rational(1));
    CHECK(fixtures::fractional_forest<Rational>(g.n, g.edges, exact.w, ones, 0));
    for (const auto& x : exact.w) CHECK((x >= 0 && x <= 1));
    for (const auto& it : exact.iterations) CHECK(it.fractional_after < it.fractional_before);

    const auto wd = as_double(g.w);
    const auto approx = round_cycles<double>(g.n, g.edges, wd, cfg);
    const auto s0 = fixtures::vertex_sums<double>(g.n, g.edges, wd);
    const auto s1 = fixtures::vertex_sums<double>(g.n, g.edges, approx.w);
    for (std::size_t v = 0; v < g.n; ++v) CHECK(std::abs(s0[v] - s1[v]) <= 1e-9);
    const std::vector<double> onesd(g.edges.size(), 1.0);
    CHECK(fixtures::fractional_forest<double>(g.n, g.edges, approx.w, onesd, 1e-9));
  }
}

TEST_CASE("round_cycles with value caps conserves value-weighted sums") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = fixtures::random_bipartite(12, 12, 0.4, seed + 1000);
    Rng rng(seed);
    std::vector<Rational> caps, w;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      caps.emplace_back(static_cast<long>(1 + rng.below(9)));
      w.push_back(g.w[i] * caps.back());
    }
    const auto r = round_cycles<Rational>(g.n, g.edges, w, std::span<const Rational>(caps));
    CHECK(fixtures::vertex_sums<Rational>(g.n, g.edges, r.w) == fixtures::vertex_sums<Rational>(g.n, g.edges, w));
    CHECK(fixtures::fractional_forest<Rational>(g.n, g.edges, r.w, caps, 0));
    for (std::size_t i = 0; i < r.w.size(); ++i) CHECK((r.w[i] >= 0 && r.w[i] <= caps[i]));
  }
}

TEST_CASE("round_cycles reports phases") {
  const auto g = fixtures::random_bipartite(20, 20, 0.3, 7);
  const auto r = round_cycles<Rational>(g.n, g.edges, g.w);
  REQUIRE_FALSE(r.iterations.empty());
  std::set<std::string> phases;
  for (const auto& rec : r.stats.records()) phases.insert(rec.phase);
  CHECK(phases == std::set<std::string>{"compress", "cycles", "ldd", "rake", "t_join"});
  CHECK(r.stats.total().rounds_elapsed > 0);
}
