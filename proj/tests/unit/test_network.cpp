#include <sstream>

#include "doctest.h"
#include "santa/congest/network.hpp"
#include "santa/congest/round_stats.hpp"

using namespace santa::congest;

TEST_CASE("messages arrive at the peer in the next round") {
  const std::vector<Edge> edges{{0, 1}};
  Network net(2, edges);
  net.run_round([](NodeId v, const Inbox&, Outbox& out) {
    Message m;
    m.put(100 + v, 8);
    out.send(1 - v, m);
  });
  CHECK(net.inbox(0).size() == 1);
  CHECK(net.inbox(0)[0].first == 1);
  CHECK(net.inbox(0)[0].second.at(0) == 101);
  CHECK(net.inbox(1)[0].second.at(0) == 100);
  CHECK(net.stats().total_messages == 2);
}

TEST_CASE("an idle round only advances the clock") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  Network net(3, edges);
  net.run_round([](NodeId, const Inbox&, Outbox&) {});
  CHECK(net.stats().rounds_elapsed == 1);
  CHECK(net.stats().total_messages == 0);
}

TEST_CASE("oversized messages are recorded as budget violations") {
  std::vector<Edge> star;
  for (NodeId leaf = 1; leaf <= 5; ++leaf) star.push_back({0, leaf});
  NetworkConfig cfg;
  cfg.bits_per_edge = 32;
  Network net(6, star, cfg);
  net.run_round([](NodeId v, const Inbox&, Outbox& out) {
    if (v != 0) return;
    Message m;
    m.put(0xdeadbeefcafef00dULL, 64);
    out.send_to_all(m);
  });
  CHECK(net.stats().budget_violations == 5);
  REQUIRE(net.violations().size() == 5);
  CHECK(net.violations()[0].bits == 64);
}

TEST_CASE("sending to a non-neighbor is rejected") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  Network net(3, edges);
  CHECK_THROWS(net.run_round([](NodeId v, const Inbox&, Outbox& out) {
    if (v == 0) out.send(2, Message{});
  }));
}

TEST_CASE("self-loops are rejected") {
  const std::vector<Edge> edges{{1, 1}};
  CHECK_THROWS_AS(Network(2, edges), std::invalid_argument);
}

TEST_CASE("stats csv has a stable header and a total row") {
  StatsLog log;
  log.add("bfs", RoundStats{3, 10, 4, 0});
  log.add("agg", RoundStats{5, 20, 8, 1});
  std::ostringstream out;
  write_stats_csv(out, "r1", log);
  CHECK(out.str() ==
        "run_id,phase,rounds,max_edge_bits,messages,violations\n"
        "r1,bfs,3,10,4,0\n"
        "r1,agg,5,20,8,1\n"
        "r1,total,8,20,12,1\n");
}

TEST_CASE("diameter of a path and a cycle") {
  std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}};
  CHECK(Network(4, path).diameter() == 3);
  path.push_back({3, 0});
  CHECK(Network(4, path).diameter() == 2);
}
