#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "santa/congest/network.hpp"

namespace santa::congest {

struct BfsTree {
  NodeId root = kNoNode;
  std::vector<NodeId> parent;                 // kNoNode at the root and unreached nodes
  std::vector<std::int64_t> depth;            // -1 when unreached
  std::vector<std::vector<NodeId>> children;  // ascending
  std::int64_t height = 0;
  std::vector<NodeId> unreachable;

  bool spans_all() const { return unreachable.empty(); }
  bool contains(NodeId v) const { return depth.at(v) >= 0; }
};

// Breadth-first tree by synchronous flooding; each node adopts the lowest-id
// neighbor of the previous layer as its parent.
BfsTree bfs_tree(Network& net, NodeId root, ExecutionMode mode = ExecutionMode::kFaithful);

// Fixed-width wire encoding for values moved by the primitives.
template <class T>
struct Codec {
  std::uint32_t bits = 64;
  std::function<Message(const T&)> encode;
  std::function<T(const Message&)> decode;
};

Codec<std::int64_t> integer_codec(std::uint32_t bits);

using Outgoing = std::vector<std::vector<std::pair<NodeId, Message>>>;

// Every node delivers its listed messages to neighbors. Messages longer than
// the per-edge budget are split into budget-sized fragments sent in
// consecutive rounds; the payload travels with the last fragment.
std::vector<Inbox> exchange(Network& net, const Outgoing& outgoing, ExecutionMode mode);

// Number of rounds a message of `bits` bits occupies an edge.
std::int64_t fragments_for(std::uint32_t bits, std::uint32_t budget);

// Cost of an exchange in which `edges` directed edges carry one message of
// `bits` bits each.
RoundStats uniform_exchange_cost(const Network& net, std::int64_t edges, std::uint32_t bits);

// Cost of a convergecast plus broadcast of `bits`-bit values over `tree`.
RoundStats aggregate_cost(const Network& net, const BfsTree& tree, std::uint32_t bits);

// Cost of sending a `bits`-bit value from the root down `tree`.
RoundStats downcast_cost(const Network& net, const BfsTree& tree, std::uint32_t bits);

namespace detail {

using MessageCombine = std::function<Message(const Message&, const Message&)>;

// Convergecast toward the tree root followed by a broadcast of the result.
// Each node folds its own message with its children's in ascending child-id
// order; the fast path reproduces that order exactly.
Message convergecast_broadcast(Network& net, const BfsTree& tree, std::vector<Message> own,
                               const MessageCombine& combine, ExecutionMode mode);

// Sends the root's message down the tree.
Message downcast(Network& net, const BfsTree& tree, Message root_message, ExecutionMode mode);

}  // namespace detail

// Folds `values` over the tree with an associative, commutative operator and
// makes the result known to every node of the tree.
template <class T, class Combine>
T aggregate(Network& net, const BfsTree& tree, std::span<const T> values, Combine combine,
            const Codec<T>& codec, ExecutionMode mode = ExecutionMode::kFaithful) {
  if (values.size() != net.size()) throw std::invalid_argument("aggregate: one value per node required");
  std::vector<Message> own(net.size());
  for (NodeId v = 0; v < net.size(); ++v) {
    if (tree.contains(v)) {
      own[v] = codec.encode(values[v]);
      own[v].bits = codec.bits;
    }
  }
  detail::MessageCombine on_wire = [&](const Message& a, const Message& b) {
    Message m = codec.encode(combine(codec.decode(a), codec.decode(b)));
    m.bits = codec.bits;
    return m;
  };
  return codec.decode(detail::convergecast_broadcast(net, tree, std::move(own), on_wire, mode));
}

// Broadcasts a value held by the root to the whole tree.
template <class T>
T broadcast(Network& net, const BfsTree& tree, const T& value, const Codec<T>& codec,
            ExecutionMode mode = ExecutionMode::kFaithful) {
  Message m = codec.encode(value);
  m.bits = codec.bits;
  return codec.decode(detail::downcast(net, tree, std::move(m), mode));
}

struct Leader {
  NodeId node = kNoNode;
  std::uint64_t label = 0;
};

// Max-label flooding; every node learns the maximum label in its component.
// Requires a connected network.
Leader elect_leader(Network& net, ExecutionMode mode = ExecutionMode::kFaithful);

}  // namespace santa::congest
