#include "santa/congest/network.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>

namespace santa::congest {

std::uint32_t ceil_log2(std::uint64_t n) {
  std::uint32_t bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

RoundStats& RoundStats::operator+=(const RoundStats& other) {
  rounds_elapsed += other.rounds_elapsed;
  max_bits_on_any_edge_per_round =
      std::max(max_bits_on_any_edge_per_round, other.max_bits_on_any_edge_per_round);
  total_messages += other.total_messages;
  budget_violations += other.budget_violations;
  return *this;
}

void Outbox::send(NodeId to, Message message) {
  if (!net_->adjacent(self_, to)) {
    throw std::logic_error("node " + std::to_string(self_) + " sent to non-neighbor " +
                           std::to_string(to));
  }
  queued_.emplace_back(to, std::move(message));
}

void Outbox::send_to_all(const Message& message) {
  for (NodeId to : net_->neighbors(self_)) queued_.emplace_back(to, message);
}

Network::Network(std::size_t num_nodes, std::span<const Edge> edges, NetworkConfig config)
    : config_(config), adjacency_(num_nodes), inboxes_(num_nodes) {
  for (const Edge& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop in network");
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw std::invalid_argument("parallel edge in network");
    }
  }
  for (NodeId u = 0; u < num_nodes; ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) edges_.push_back({u, v});
    }
  }
  labels_.resize(num_nodes);
  for (NodeId v = 0; v < num_nodes; ++v) labels_[v] = v;
  id_bits_ = std::max<std::uint32_t>(1, ceil_log2(num_nodes));
  if (config_.bits_per_edge > 0) {
    budget_bits_ = config_.bits_per_edge;
  } else {
    if (config_.bandwidth_constant == 0) throw std::invalid_argument("bandwidth constant must be positive");
    budget_bits_ = config_.bandwidth_constant * id_bits_;
  }
}

bool Network::adjacent(NodeId u, NodeId v) const {
  const auto& nbrs = adjacency_.at(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

void Network::set_labels(std::vector<std::uint64_t> labels) {
  if (labels.size() != size()) throw std::invalid_argument("label count mismatch");
  labels_ = std::move(labels);
}

Rng Network::node_rng(NodeId v, std::uint64_t stream) const {
  return Rng(Rng::derive(Rng::derive(config_.seed, stream), v));
}

std::int64_t Network::diameter() const {
  if (diameter_ >= 0) return diameter_;
  std::int64_t best = 0;
  std::vector<std::int64_t> dist(size());
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < size(); ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      best = std::max(best, dist[u]);
      for (NodeId w : adjacency_[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  diameter_ = best;
  return best;
}

RoundStats Network::run_round(const StepFn& step) {
  RoundStats delta;
  delta.rounds_elapsed = 1;
  const std::int64_t round = stats_.rounds_elapsed + 1;
  next_.resize(size());
  for (auto& inbox : next_) inbox.clear();
  load_.resize(size(), 0);
  Outbox out(*this, 0);
  for (NodeId v = 0; v < size(); ++v) {
    out.self_ = v;
    out.queued_.clear();
    step(v, inboxes_[v], out);
    touched_.clear();
    for (auto& [to, message] : out.queued_) {
      if (load_[to] == 0) touched_.push_back(to);
      load_[to] += message.bits;
      next_[to].emplace_back(v, std::move(message));
      ++delta.total_messages;
    }
    // Edges out of v in receiver order, as a map keyed by (from, to) would list them.
    std::sort(touched_.begin(), touched_.end());
    for (NodeId to : touched_) {
      const std::int64_t bits = load_[to];
      load_[to] = 0;
      delta.max_bits_on_any_edge_per_round = std::max(delta.max_bits_on_any_edge_per_round, bits);
      if (config_.strict && bits > budget_bits_) {
        ++delta.budget_violations;
        violations_.push_back({round, v, to, bits});
      }
    }
  }
  inboxes_.swap(next_);
  pending_messages_ = delta.total_messages;
  charge(delta);
  return delta;
}

void Network::charge(const RoundStats& delta) {
  stats_ += delta;
  phase_max_bits_ = std::max(phase_max_bits_, delta.max_bits_on_any_edge_per_round);
}

PhaseMeter::PhaseMeter(Network& net) : net_(&net), start_(net.stats()), saved_max_(net.phase_max_bits_) {
  net.phase_max_bits_ = 0;
}

PhaseMeter::~PhaseMeter() { net_->phase_max_bits_ = std::max(saved_max_, net_->phase_max_bits_); }

RoundStats PhaseMeter::finish() const {
  const RoundStats& now = net_->stats();
  RoundStats delta;
  delta.rounds_elapsed = now.rounds_elapsed - start_.rounds_elapsed;
  delta.total_messages = now.total_messages - start_.total_messages;
  delta.budget_violations = now.budget_violations - start_.budget_violations;
  delta.max_bits_on_any_edge_per_round = net_->phase_max_bits_;
  return delta;
}

}  // namespace santa::congest
