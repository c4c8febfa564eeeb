#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "graph_fixtures.hpp"
#include "santa/congest/primitives.hpp"

using namespace santa::congest;

namespace {

const ExecutionMode kModes[] = {ExecutionMode::kFaithful, ExecutionMode::kFastPath};

Codec<std::int64_t> wide() { return integer_codec(20); }

}  // namespace

TEST_CASE("bfs depths on a path") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  for (ExecutionMode mode : kModes) {
    Network net(3, edges);
    BfsTree t = bfs_tree(net, 0, mode);
    CHECK(t.depth == std::vector<std::int64_t>{0, 1, 2});
    CHECK(t.parent[0] == kNoNode);
    CHECK(t.parent[2] == 1);
    CHECK(t.height == 2);
  }
}

TEST_CASE("bfs on a four-cycle has height two") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  for (NodeId root = 0; root < 4; ++root) {
    Network net(4, edges);
    CHECK(bfs_tree(net, root).height == 2);
  }
}

TEST_CASE("bfs depths equal queue-search distances and both modes agree") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t n = 5 + seed % 40;
    const auto edges = fixtures::random_connected(n, n / 2 + seed % 7, seed);
    const NodeId root = static_cast<NodeId>(seed % n);
    Network faithful(n, edges), fast(n, edges);
    BfsTree a = bfs_tree(faithful, root, ExecutionMode::kFaithful);
    BfsTree b = bfs_tree(fast, root, ExecutionMode::kFastPath);
    CHECK(a.depth == fixtures::distances(n, edges, root));
    CHECK(a.parent == b.parent);
    CHECK(a.children == b.children);
    CHECK(faithful.stats() == fast.stats());
  }
}

TEST_CASE("bfs flags unreachable nodes") {
  const std::vector<Edge> edges{{0, 1}, {2, 3}};
  Network net(4, edges);
  BfsTree t = bfs_tree(net, 0);
  CHECK_FALSE(t.spans_all());
  CHECK(t.unreachable == std::vector<NodeId>{2, 3});
}

TEST_CASE("aggregate sum, max and count") {
  const std::size_t n = 12;
  const auto edges = fixtures::random_connected(n, 5, 7);
  for (ExecutionMode mode : kModes) {
    Network net(n, edges);
    BfsTree t = bfs_tree(net, 0, mode);
    std::vector<std::int64_t> values(n);
    std::iota(values.begin(), values.end(), 1);
    auto sum = aggregate<std::int64_t>(net, t, values, std::plus<>{}, wide(), mode);
    CHECK(sum == static_cast<std::int64_t>(n * (n + 1) / 2));
    std::vector<std::int64_t> few(n, 0);
    few[3] = 3;
    few[5] = 9;
    few[8] = 2;
    auto mx = aggregate<std::int64_t>(
        net, t, few, [](std::int64_t a, std::int64_t b) { return std::max(a, b); }, wide(), mode);
    CHECK(mx == 9);
  }
}

TEST_CASE("aggregated flag count equals the direct count") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 3 + seed * 3;
    const auto edges = fixtures::random_connected(n, seed, seed);
    santa::Rng rng(seed * 31);
    std::vector<std::int64_t> flags(n);
    for (auto& f : flags) f = static_cast<std::int64_t>(rng.below(2));
    const auto expected = std::accumulate(flags.begin(), flags.end(), std::int64_t{0});
    Network a(n, edges), b(n, edges);
    BfsTree ta = bfs_tree(a, 0, ExecutionMode::kFaithful);
    BfsTree tb = bfs_tree(b, 0, ExecutionMode::kFastPath);
    CHECK(aggregate<std::int64_t>(a, ta, flags, std::plus<>{}, wide(), ExecutionMode::kFaithful) ==
          expected);
    CHECK(aggregate<std::int64_t>(b, tb, flags, std::plus<>{}, wide(), ExecutionMode::kFastPath) ==
          expected);
    CHECK(a.stats() == b.stats());
  }
}

TEST_CASE("oversized aggregate payloads are fragmented, not violated") {
  const auto edges = fixtures::random_connected(20, 10, 3);
  NetworkConfig cfg;
  cfg.bits_per_edge = 8;
  Network a(20, edges, cfg), b(20, edges, cfg);
  BfsTree ta = bfs_tree(a, 0, ExecutionMode::kFastPath);
  BfsTree tb = bfs_tree(b, 0, ExecutionMode::kFastPath);
  const RoundStats before = a.stats();
  std::vector<std::int64_t> values(20, 1000);
  auto codec = integer_codec(30);
  CHECK(aggregate<std::int64_t>(a, ta, values, std::plus<>{}, codec, ExecutionMode::kFaithful) == 20000);
  CHECK(aggregate<std::int64_t>(b, tb, values, std::plus<>{}, codec, ExecutionMode::kFastPath) == 20000);
  CHECK(a.stats() == b.stats());
  CHECK(a.stats().budget_violations == before.budget_violations);
}

TEST_CASE("broadcast reaches every node") {
  const auto edges = fixtures::random_connected(15, 4, 11);
  for (ExecutionMode mode : kModes) {
    Network net(15, edges);
    BfsTree t = bfs_tree(net, 4, mode);
    CHECK(broadcast<std::int64_t>(net, t, 77, wide(), mode) == 77);
  }
}

TEST_CASE("exchange delivers along edges in both modes") {
  const std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}, {2, 3}};
  NetworkConfig cfg;
  cfg.bits_per_edge = 10;
  Network a(4, edges, cfg), b(4, edges, cfg);
  Outgoing out(4);
  Message big;
  big.put(5, 25);
  Message small;
  small.put(6, 4);
  out[0].emplace_back(1, big);
  out[0].emplace_back(2, small);
  out[2].emplace_back(3, big);
  out[2].emplace_back(0, small);
  const auto ia = exchange(a, out, ExecutionMode::kFaithful);
  const auto ib = exchange(b, out, ExecutionMode::kFastPath);
  CHECK(ia[1].size() == 1);
  CHECK(ia[1][0].second.at(0) == 5);
  CHECK(ia[3][0].second.at(0) == 5);
  CHECK(ia[0][0].second.at(0) == 6);
  CHECK(a.stats() == b.stats());
  CHECK(a.stats().rounds_elapsed == fragments_for(25, 10) + 1);
  for (NodeId v = 0; v < 4; ++v) {
    REQUIRE(ia[v].size() == ib[v].size());
    for (std::size_t k = 0; k < ia[v].size(); ++k) {
      CHECK(ia[v][k].first == ib[v][k].first);
      CHECK(ia[v][k].second.fields == ib[v][k].second.fields);
    }
  }
}

TEST_CASE("leader is the maximum label") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  for (ExecutionMode mode : kModes) {
    Network net(3, edges);
    net.set_labels({7, 2, 9});
    Leader l = elect_leader(net, mode);
    CHECK(l.label == 9);
    CHECK(l.node == 2);
  }
  Network single(1, std::vector<Edge>{});
  CHECK(elect_leader(single).node == 0);
}

TEST_CASE("leader election on random labels matches the maximum") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::size_t n = 4 + seed % 30;
    const auto edges = fixtures::random_connected(n, seed % 9, seed);
    santa::Rng rng(seed);
    std::vector<std::uint64_t> labels(n);
    for (auto& l : labels) l = rng.below(1'000'000);
    const auto expected = *std::max_element(labels.begin(), labels.end());
    Network a(n, edges), b(n, edges);
    a.set_labels(labels);
    b.set_labels(labels);
    CHECK(elect_leader(a, ExecutionMode::kFaithful).label == expected);
    CHECK(elect_leader(b, ExecutionMode::kFastPath).label == expected);
    CHECK(a.stats() == b.stats());
  }
}

TEST_CASE("leader election rejects disconnected networks") {
  const std::vector<Edge> edges{{0, 1}};
  Network net(3, edges);
  CHECK_THROWS(elect_leader(net));
}
