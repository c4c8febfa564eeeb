#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "graph_fixtures.hpp"
#include "santa/congest/virtual_graph.hpp"

using namespace santa::congest;

namespace {

std::vector<std::size_t> all_indices(std::size_t m) {
  std::vector<std::size_t> v(m);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void check_paths(const VirtualGraph& vg, const std::vector<Edge>& edges, std::size_t n) {
  std::vector<int> degree(n, 0);
  for (const Edge& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  for (const VirtualEdge& ve : vg.edges) {
    REQUIRE(ve.path.size() == ve.base_edges.size() + 1);
    CHECK(ve.path.front() == ve.u);
    CHECK(ve.path.back() == ve.v);
    CHECK(ve.u != ve.v);
    for (std::size_t k = 0; k < ve.base_edges.size(); ++k) {
      const Edge& e = edges[ve.base_edges[k]];
      CHECK(std::minmax(e.u, e.v) == std::minmax(ve.path[k], ve.path[k + 1]));
    }
    for (std::size_t k = 1; k + 1 < ve.path.size(); ++k) CHECK(degree[ve.path[k]] == 2);
  }
}

// Root reached by following parents, or kNoNode on a loop longer than n.
NodeId climb(const RootedForest& f, NodeId v) {
  for (std::size_t steps = 0; steps <= f.parent.size(); ++steps) {
    if (f.parent[v] == kNoNode) return v;
    v = f.parent[v];
  }
  return kNoNode;
}

}  // namespace

TEST_CASE("a path of five vertices contracts to one even edge") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  VirtualGraph vg = compress_virtual_graph(5, edges);
  REQUIRE(vg.edges.size() == 1);
  CHECK(vg.edges[0].contracted);
  CHECK(vg.edges[0].parity() == 0);
  CHECK(vg.nodes == std::vector<NodeId>{0, 4});
}

TEST_CASE("a six-cycle splits into two contracted edges and expands back") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}};
  VirtualGraph vg = compress_virtual_graph(6, edges);
  CHECK(vg.edges.size() >= 2);
  CHECK(vg.expand() == all_indices(6));
  check_paths(vg, edges, 6);
}

TEST_CASE("a graph without degree-two vertices is its own compression") {
  const std::vector<Edge> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  VirtualGraph vg = compress_virtual_graph(4, k4);
  CHECK(vg.edges.size() == 6);
  CHECK(std::none_of(vg.edges.begin(), vg.edges.end(), [](const VirtualEdge& e) { return e.contracted; }));
  CHECK(compress_virtual_graph(4, std::vector<Edge>{}).edges.empty());
}

TEST_CASE("odd-only compression keeps even paths as direct edges") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
  VirtualGraph all = compress_virtual_graph(8, edges, ContractMode::kAllPaths);
  VirtualGraph odd = compress_virtual_graph(8, edges, ContractMode::kOddPathsOnly);
  CHECK(all.edges.size() == 1);
  CHECK(odd.edges.size() == 1);
  CHECK(odd.edges[0].parity() == 1);
  const std::vector<Edge> even{{0, 1}, {1, 2}};
  CHECK(compress_virtual_graph(3, even, ContractMode::kOddPathsOnly).edges.size() == 2);
}

TEST_CASE("compression followed by expansion reproduces random subgraphs") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 6 + seed % 50;
    auto edges = fixtures::random_connected(n, seed % 5, seed);
    santa::Rng rng(seed);
    std::vector<Edge> sub;
    for (const Edge& e : edges) {
      if (rng.below(4) != 0) sub.push_back(e);
    }
    for (ContractMode mode : {ContractMode::kAllPaths, ContractMode::kOddPathsOnly}) {
      VirtualGraph vg = compress_virtual_graph(n, sub, mode);
      CHECK(vg.expand() == all_indices(sub.size()));
      check_paths(vg, sub, n);
    }
  }
}

TEST_CASE("shortcuts are spaced along long paths") {
  std::vector<Edge> path;
  for (NodeId v = 0; v + 1 < 25; ++v) path.push_back({v, v + 1});
  VirtualGraph vg = compress_virtual_graph(25, path);
  CHECK(vg.shortcuts == std::vector<NodeId>{5, 10, 15, 20});
}

TEST_CASE("rooting a single edge") {
  const std::vector<Edge> edges{{0, 1}};
  RootedForest f = root_forest(2, edges);
  REQUIRE(f.roots.size() == 1);
  const NodeId other = 1 - f.roots[0];
  CHECK(f.parent[other] == f.roots[0]);
}

TEST_CASE("rooting a seven-vertex path gives one common root") {
  std::vector<Edge> path;
  for (NodeId v = 0; v + 1 < 7; ++v) path.push_back({v, v + 1});
  RootedForest f = root_forest(7, path);
  REQUIRE(f.roots.size() == 1);
  for (NodeId v = 0; v < 7; ++v) CHECK(climb(f, v) == f.roots[0]);
}

TEST_CASE("two disjoint trees have two roots") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {3, 4}};
  CHECK(root_forest(5, edges).roots.size() == 2);
}

TEST_CASE("cycles are rejected") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 0}};
  CHECK_THROWS_AS(root_forest(3, edges), std::invalid_argument);
}

TEST_CASE("random forests root once per component, honoring pins") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const std::size_t n = 2 + seed % 70;
    santa::Rng rng(seed);
    std::vector<Edge> forest;
    for (NodeId v = 1; v < n; ++v) {
      if (rng.below(5) != 0) forest.push_back({static_cast<NodeId>(rng.below(v)), v});
    }
    // One pin in the tree of vertex 0 when seed is odd.
    std::vector<NodeId> pins;
    const auto d = fixtures::distances(n, forest, 0);
    if (seed % 2 == 1) {
      std::vector<NodeId> comp;
      for (NodeId v = 0; v < n; ++v) {
        if (d[v] >= 0) comp.push_back(v);
      }
      pins.push_back(comp[rng.below(comp.size())]);
    }
    RootedForest f = root_forest(n, forest, pins);
    std::size_t components = 0;
    std::vector<bool> seen(n, false);
    for (NodeId s = 0; s < n; ++s) {
      if (seen[s]) continue;
      ++components;
      const auto ds = fixtures::distances(n, forest, s);
      NodeId root = climb(f, s);
      REQUIRE(root != kNoNode);
      CHECK(ds[root] >= 0);
      for (NodeId v = 0; v < n; ++v) {
        if (ds[v] < 0) continue;
        seen[v] = true;
        CHECK(climb(f, v) == root);
        if (f.parent[v] != kNoNode) {
          const auto dv = fixtures::distances(n, forest, v);
          CHECK(dv[f.parent[v]] == 1);
        }
      }
    }
    CHECK(f.roots.size() == components);
    if (!pins.empty()) CHECK(f.parent[pins[0]] == kNoNode);
  }
}

TEST_CASE("network rooting charges virtual rounds") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}};
  Network net(4, edges);
  RootedForest f = root_forest(net, edges, {}, 3);
  CHECK(net.stats().rounds_elapsed == 2 * f.iterations * 3);
}
