#include "santa/congest/primitives.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace santa::congest {
namespace {

void require_quiet(const Network& net) {
  if (net.in_flight()) throw std::logic_error("primitive started with undelivered messages");
}

bool is_fragment(const Message& m) { return m.fields.empty(); }

// The message as it was posted, before fragmentation.
Message reassembled(Message m) {
  if (m.whole_bits > 0) {
    m.bits = m.whole_bits;
    m.whole_bits = 0;
  }
  return m;
}

// Per-edge FIFO of outgoing messages, each split into budget-sized fragments.
class Mailer {
 public:
  Mailer(std::size_t n, std::uint32_t budget) : queues_(n), pending_from_(n, 0), budget_(budget) {}

  void post(NodeId from, NodeId to, Message m) {
    const std::int64_t f = fragments_for(m.bits, budget_);
    queues_[from][to].push_back({std::move(m), f});
    ++pending_;
    ++pending_from_[from];
  }

  void flush(NodeId from, Outbox& out) {
    if (pending_from_[from] == 0) return;
    for (auto& [to, queue] : queues_[from]) {
      if (queue.empty()) continue;
      Pending& head = queue.front();
      if (head.remaining > 1) {
        out.send(to, Message{{}, budget_});
        --head.remaining;
        continue;
      }
      Message last = std::move(head.message);
      const std::int64_t f = fragments_for(last.bits, budget_);
      if (f > 1) {
        last.whole_bits = last.bits;
        last.bits -= static_cast<std::uint32_t>((f - 1) * budget_);
      }
      out.send(to, std::move(last));
      queue.pop_front();
      --pending_;
      --pending_from_[from];
    }
  }

  bool idle() const { return pending_ == 0; }

 private:
  struct Pending {
    Message message;
    std::int64_t remaining;
  };
  std::vector<std::map<NodeId, std::deque<Pending>>> queues_;
  std::vector<std::int64_t> pending_from_;
  std::uint32_t budget_;
  std::int64_t pending_ = 0;
};

std::int64_t tree_size(const BfsTree& tree) {
  return static_cast<std::int64_t>(std::count_if(tree.depth.begin(), tree.depth.end(),
                                                 [](std::int64_t d) { return d >= 0; }));
}

}  // namespace

std::int64_t fragments_for(std::uint32_t bits, std::uint32_t budget) {
  if (bits <= budget) return 1;
  return (static_cast<std::int64_t>(bits) + budget - 1) / budget;
}

RoundStats uniform_exchange_cost(const Network& net, std::int64_t edges, std::uint32_t bits) {
  RoundStats delta;
  if (edges <= 0) return delta;
  const std::int64_t f = fragments_for(bits, net.bits_per_edge());
  delta.rounds_elapsed = f + 1;
  delta.total_messages = edges * f;
  delta.max_bits_on_any_edge_per_round = std::min(bits, net.bits_per_edge());
  return delta;
}

RoundStats aggregate_cost(const Network& net, const BfsTree& tree, std::uint32_t bits) {
  const std::int64_t size = tree_size(tree);
  const std::int64_t f = fragments_for(bits, net.bits_per_edge());
  RoundStats delta;
  delta.rounds_elapsed = tree.height >= 1 ? 2 * tree.height * f + 1 : 1;
  delta.total_messages = 2 * (size - 1) * f;
  if (size > 1) delta.max_bits_on_any_edge_per_round = std::min(bits, net.bits_per_edge());
  return delta;
}

RoundStats downcast_cost(const Network& net, const BfsTree& tree, std::uint32_t bits) {
  const std::int64_t size = tree_size(tree);
  const std::int64_t f = fragments_for(bits, net.bits_per_edge());
  RoundStats delta;
  delta.rounds_elapsed = tree.height >= 1 ? tree.height * f + 1 : 1;
  delta.total_messages = (size - 1) * f;
  if (size > 1) delta.max_bits_on_any_edge_per_round = std::min(bits, net.bits_per_edge());
  return delta;
}

Codec<std::int64_t> integer_codec(std::uint32_t bits) {
  Codec<std::int64_t> codec;
  codec.bits = bits;
  codec.encode = [](const std::int64_t& v) {
    Message m;
    m.fields.push_back(static_cast<std::uint64_t>(v));
    return m;
  };
  codec.decode = [](const Message& m) { return static_cast<std::int64_t>(m.at(0)); };
  return codec;
}

BfsTree bfs_tree(Network& net, NodeId root, ExecutionMode mode) {
  if (root >= net.size()) throw std::invalid_argument("bfs_tree: root out of range");
  require_quiet(net);
  const std::size_t n = net.size();
  BfsTree tree;
  tree.root = root;
  tree.parent.assign(n, kNoNode);
  tree.depth.assign(n, -1);
  tree.children.assign(n, {});
  const std::uint32_t bits = 2 * net.id_bits() + 1;

  if (mode == ExecutionMode::kFaithful) {
    bool started = false;
    auto step = [&](NodeId v, const Inbox& inbox, Outbox& out) {
      bool joined_now = false;
      if (v == root && !started) {
        started = true;
        tree.depth[v] = 0;
        joined_now = true;
      }
      for (const auto& [sender, msg] : inbox) {
        const auto sender_depth = static_cast<std::int64_t>(msg.at(0));
        const auto sender_parent = static_cast<NodeId>(msg.at(1));
        if (tree.depth[v] < 0) {
          tree.depth[v] = sender_depth + 1;
          tree.parent[v] = sender;  // inbox is ordered by sender id
          joined_now = true;
        }
        if (sender_parent == v) tree.children[v].push_back(sender);
      }
      if (joined_now) {
        Message m;
        m.put(static_cast<std::uint64_t>(tree.depth[v]), net.id_bits());
        m.put(tree.parent[v], net.id_bits() + 1);
        out.send_to_all(m);
      }
    };
    do {
      net.run_round(step);
    } while (net.in_flight());
  } else {
    // Layer by layer in ascending id order, matching the flooding rule.
    std::vector<NodeId> layer{root};
    tree.depth[root] = 0;
    while (!layer.empty()) {
      std::vector<NodeId> next;
      for (NodeId u : layer) {
        for (NodeId w : net.neighbors(u)) {
          if (tree.depth[w] < 0) {
            tree.depth[w] = tree.depth[u] + 1;
            tree.parent[w] = u;
            tree.children[u].push_back(w);
            next.push_back(w);
          }
        }
      }
      std::sort(next.begin(), next.end());
      layer = std::move(next);
    }
    for (auto& c : tree.children) std::sort(c.begin(), c.end());
    RoundStats delta;
    std::int64_t height = 0;
    for (auto d : tree.depth) height = std::max(height, d);
    delta.rounds_elapsed = net.neighbors(root).empty() ? 1 : height + 2;
    for (NodeId v = 0; v < n; ++v) {
      if (tree.depth[v] >= 0) delta.total_messages += static_cast<std::int64_t>(net.neighbors(v).size());
    }
    if (delta.total_messages > 0) delta.max_bits_on_any_edge_per_round = bits;
    if (net.strict() && bits > net.bits_per_edge()) delta.budget_violations = delta.total_messages;
    net.charge(delta);
  }

  for (NodeId v = 0; v < n; ++v) {
    if (tree.depth[v] < 0) tree.unreachable.push_back(v);
    tree.height = std::max(tree.height, tree.depth[v]);
  }
  return tree;
}

std::vector<Inbox> exchange(Network& net, const Outgoing& outgoing, ExecutionMode mode) {
  if (outgoing.size() != net.size()) throw std::invalid_argument("exchange: one outbox per node required");
  require_quiet(net);
  std::vector<Inbox> received(net.size());
  const std::uint32_t budget = net.bits_per_edge();

  if (mode == ExecutionMode::kFaithful) {
    Mailer mailer(net.size(), budget);
    bool any = false;
    for (NodeId v = 0; v < net.size(); ++v) {
      for (const auto& [to, msg] : outgoing[v]) {
        if (!net.adjacent(v, to)) throw std::logic_error("exchange: message to non-neighbor");
        mailer.post(v, to, msg);
        any = true;
      }
    }
    if (!any) return received;
    auto step = [&](NodeId v, const Inbox& inbox, Outbox& out) {
      for (const auto& [sender, msg] : inbox) {
        if (!is_fragment(msg)) received[v].emplace_back(sender, reassembled(msg));
      }
      mailer.flush(v, out);
    };
    do {
      net.run_round(step);
    } while (!mailer.idle() || net.in_flight());
    return received;
  }

  std::map<std::pair<NodeId, NodeId>, std::int64_t> occupancy;
  RoundStats delta;
  for (NodeId v = 0; v < net.size(); ++v) {
    for (const auto& [to, msg] : outgoing[v]) {
      if (!net.adjacent(v, to)) throw std::logic_error("exchange: message to non-neighbor");
      const std::int64_t f = fragments_for(msg.bits, budget);
      occupancy[{v, to}] += f;
      delta.total_messages += f;
      delta.max_bits_on_any_edge_per_round =
          std::max<std::int64_t>(delta.max_bits_on_any_edge_per_round, std::min(msg.bits, budget));
      received[to].emplace_back(v, msg);
    }
  }
  if (occupancy.empty()) return received;
  std::int64_t longest = 0;
  for (const auto& [edge, f] : occupancy) longest = std::max(longest, f);
  delta.rounds_elapsed = longest + 1;
  for (auto& inbox : received) {
    std::stable_sort(inbox.begin(), inbox.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  net.charge(delta);
  return received;
}

namespace detail {

Message convergecast_broadcast(Network& net, const BfsTree& tree, std::vector<Message> own,
                               const MessageCombine& combine, ExecutionMode mode) {
  require_quiet(net);
  const std::size_t n = net.size();
  const NodeId root = tree.root;
  const std::uint32_t budget = net.bits_per_edge();

  if (mode == ExecutionMode::kFaithful) {
    Mailer mailer(n, budget);
    std::vector<std::map<NodeId, Message>> from_children(n);
    std::vector<bool> sent(n, false);
    std::vector<bool> known(n, false);
    std::vector<Message> result(n);
    std::int64_t missing = tree_size(tree);
    auto step = [&](NodeId v, const Inbox& inbox, Outbox& out) {
      if (!tree.contains(v)) return;
      for (const auto& [sender, msg] : inbox) {
        if (is_fragment(msg)) continue;
        if (sender == tree.parent[v]) {
          result[v] = reassembled(msg);
          known[v] = true;
          --missing;
          for (NodeId c : tree.children[v]) mailer.post(v, c, result[v]);
        } else {
          from_children[v].emplace(sender, reassembled(msg));
        }
      }
      if (!sent[v] && from_children[v].size() == tree.children[v].size()) {
        sent[v] = true;
        Message acc = own[v];
        for (NodeId c : tree.children[v]) acc = combine(acc, from_children[v].at(c));
        if (v == root) {
          result[v] = acc;
          known[v] = true;
          --missing;
          for (NodeId c : tree.children[v]) mailer.post(v, c, acc);
        } else {
          mailer.post(v, tree.parent[v], std::move(acc));
        }
      }
      mailer.flush(v, out);
    };
    do {
      net.run_round(step);
    } while (!mailer.idle() || net.in_flight() || missing > 0);
    for (NodeId v = 0; v < n; ++v) {
      if (tree.contains(v) && result[v].fields != result[root].fields) {
        throw std::logic_error("convergecast: nodes disagree on the result");
      }
    }
    return result[root];
  }

  // Post-order fold in the same order the faithful mode uses.
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (NodeId c : tree.children[v]) stack.push_back(c);
  }
  std::vector<Message> acc(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    acc[v] = own[v];
    for (NodeId c : tree.children[v]) acc[v] = combine(acc[v], acc[c]);
  }
  net.charge(aggregate_cost(net, tree, own[root].bits));
  return acc[root];
}

Message downcast(Network& net, const BfsTree& tree, Message root_message, ExecutionMode mode) {
  require_quiet(net);
  const std::size_t n = net.size();
  const std::uint32_t budget = net.bits_per_edge();
  if (mode == ExecutionMode::kFaithful) {
    Mailer mailer(n, budget);
    std::vector<bool> known(n, false);
    std::int64_t missing = tree_size(tree);
    bool started = false;
    auto step = [&](NodeId v, const Inbox& inbox, Outbox& out) {
      if (!tree.contains(v)) return;
      if (v == tree.root && !started) {
        started = true;
        known[v] = true;
        --missing;
        for (NodeId c : tree.children[v]) mailer.post(v, c, root_message);
      }
      for (const auto& [sender, msg] : inbox) {
        if (is_fragment(msg) || sender != tree.parent[v]) continue;
        known[v] = true;
        --missing;
        for (NodeId c : tree.children[v]) mailer.post(v, c, reassembled(msg));
      }
      mailer.flush(v, out);
    };
    do {
      net.run_round(step);
    } while (!mailer.idle() || net.in_flight() || missing > 0);
    return root_message;
  }
  net.charge(downcast_cost(net, tree, root_message.bits));
  return root_message;
}

}  // namespace detail

Leader elect_leader(Network& net, ExecutionMode mode) {
  require_quiet(net);
  const std::size_t n = net.size();
  if (n == 0) throw std::invalid_argument("elect_leader: empty network");
  std::uint64_t max_label = 0;
  for (NodeId v = 0; v < n; ++v) max_label = std::max(max_label, net.label(v));
  const std::uint32_t bits = std::max<std::uint32_t>(1, ceil_log2(max_label + 1));

  std::vector<std::uint64_t> best(n);
  for (NodeId v = 0; v < n; ++v) best[v] = net.label(v);

  if (mode == ExecutionMode::kFaithful) {
    bool first = true;
    auto step = [&](NodeId v, const Inbox& inbox, Outbox& out) {
      bool improved = first;
      for (const auto& [sender, msg] : inbox) {
        if (msg.at(0) > best[v]) {
          best[v] = msg.at(0);
          improved = true;
        }
      }
      if (improved) {
        Message m;
        m.put(best[v], bits);
        out.send_to_all(m);
      }
    };
    do {
      net.run_round(step);
      first = false;
    } while (net.in_flight());
  } else {
    RoundStats delta;
    std::vector<bool> sending(n, true);
    std::vector<std::uint64_t> next(n);
    while (true) {
      ++delta.rounds_elapsed;
      std::int64_t sent = 0;
      for (NodeId v = 0; v < n; ++v) {
        if (sending[v]) sent += static_cast<std::int64_t>(net.neighbors(v).size());
      }
      delta.total_messages += sent;
      if (sent == 0) break;
      delta.max_bits_on_any_edge_per_round = bits;
      if (net.strict() && bits > net.bits_per_edge()) delta.budget_violations += sent;
      next = best;
      for (NodeId v = 0; v < n; ++v) {
        if (!sending[v]) continue;
        for (NodeId w : net.neighbors(v)) next[w] = std::max(next[w], best[v]);
      }
      for (NodeId v = 0; v < n; ++v) sending[v] = next[v] > best[v];
      best = next;
    }
    net.charge(delta);
  }

  Leader leader;
  leader.label = best[0];
  for (NodeId v = 0; v < n; ++v) {
    if (best[v] != leader.label) throw std::invalid_argument("elect_leader: network is disconnected");
    if (net.label(v) == leader.label && leader.node == kNoNode) leader.node = v;
  }
  return leader;
}

}  // namespace santa::congest
