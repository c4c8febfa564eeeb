#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "santa/common/numbers.hpp"

namespace santa::congest {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// A message is a sequence of fields plus the number of bits its encoding
// occupies on the wire. Only `bits` is charged against the edge budget; the
// field words are how the simulator carries the payload.
struct Message {
  std::vector<std::uint64_t> fields;
  std::uint32_t bits = 0;
  // Width of the whole message when this is the last fragment of a longer
  // one; 0 otherwise.
  std::uint32_t whole_bits = 0;

  Message& put(std::uint64_t value, std::uint32_t width) {
    fields.push_back(value);
    bits += width;
    return *this;
  }
  std::uint64_t at(std::size_t i) const { return fields.at(i); }
};

struct RoundStats {
  std::int64_t rounds_elapsed = 0;
  std::int64_t max_bits_on_any_edge_per_round = 0;
  std::int64_t total_messages = 0;
  std::int64_t budget_violations = 0;

  // Sequential composition of two phases.
  RoundStats& operator+=(const RoundStats& other);
  friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

struct BudgetViolation {
  std::int64_t round = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::int64_t bits = 0;
};

enum class ExecutionMode { kFaithful, kFastPath };

struct NetworkConfig {
  // Budget is bandwidth_constant * ceil(log2 n) bits unless bits_per_edge > 0.
  std::uint32_t bandwidth_constant = 8;
  std::uint32_t bits_per_edge = 0;
  bool strict = true;
  std::uint64_t seed = 0;
};

using Inbox = std::vector<std::pair<NodeId, Message>>;

class Network;

class Outbox {
 public:
  void send(NodeId to, Message message);
  void send_to_all(const Message& message);

 private:
  friend class Network;
  Outbox(const Network& net, NodeId self) : net_(&net), self_(self) {}
  const Network* net_;
  NodeId self_;
  std::vector<std::pair<NodeId, Message>> queued_;
};

// Synchronous message-passing network. Messages sent during round t are
// visible in the receiver's inbox during round t+1, ordered by sender id.
class Network {
 public:
  using StepFn = std::function<void(NodeId, const Inbox&, Outbox&)>;

  Network(std::size_t num_nodes, std::span<const Edge> edges, NetworkConfig config = {});

  std::size_t size() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  bool adjacent(NodeId u, NodeId v) const;

  // External identifiers used by leader election; defaults to the index.
  void set_labels(std::vector<std::uint64_t> labels);
  std::uint64_t label(NodeId v) const { return labels_.at(v); }

  std::uint32_t bits_per_edge() const { return budget_bits_; }
  // ceil(log2 n), at least 1: width of a node id or a depth on the wire.
  std::uint32_t id_bits() const { return id_bits_; }
  bool strict() const { return config_.strict; }
  std::uint64_t seed() const { return config_.seed; }
  Rng node_rng(NodeId v, std::uint64_t stream) const;

  // Hop diameter of the network (max over components); computed lazily.
  std::int64_t diameter() const;

  RoundStats run_round(const StepFn& step);
  bool in_flight() const { return pending_messages_ > 0; }
  const Inbox& inbox(NodeId v) const { return inboxes_.at(v); }

  // Accounts for rounds executed by a centralized fast path.
  void charge(const RoundStats& delta);

  const RoundStats& stats() const { return stats_; }
  std::span<const BudgetViolation> violations() const { return violations_; }

  // Largest per-edge load seen since the innermost open PhaseMeter began.
  std::int64_t phase_max_bits() const { return phase_max_bits_; }

 private:
  friend class PhaseMeter;

  NetworkConfig config_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::uint64_t> labels_;
  std::uint32_t id_bits_ = 1;
  std::uint32_t budget_bits_ = 8;
  std::vector<Inbox> inboxes_;
  std::int64_t pending_messages_ = 0;
  RoundStats stats_;
  std::int64_t phase_max_bits_ = 0;
  std::vector<BudgetViolation> violations_;
  mutable std::int64_t diameter_ = -1;
  // Per-round scratch reused across rounds.
  std::vector<Inbox> next_;
  std::vector<std::int64_t> load_;
  std::vector<NodeId> touched_;
};

// Captures the stats accumulated by one phase. Meters nest: the enclosing
// meter's edge-bit maximum is restored when an inner meter is destroyed.
class PhaseMeter {
 public:
  explicit PhaseMeter(Network& net);
  ~PhaseMeter();
  PhaseMeter(const PhaseMeter&) = delete;
  PhaseMeter& operator=(const PhaseMeter&) = delete;

  RoundStats finish() const;

 private:
  Network* net_;
  RoundStats start_;
  std::int64_t saved_max_ = 0;
};

std::uint32_t ceil_log2(std::uint64_t n);

}  // namespace santa::congest
