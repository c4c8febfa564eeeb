#include "santa/lp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstring>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "santa/congest/primitives.hpp"
#include "santa/lp/quantize.hpp"

namespace santa::lp {

using congest::BfsTree;
using congest::ExecutionMode;
using congest::Message;
using congest::Network;
using congest::NodeId;

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();
constexpr std::uint32_t kRawRealBits = 80;

void put_real(Message& m, long double v) {
  std::uint64_t words[2] = {0, 0};
  std::memcpy(words, &v, sizeof(long double) <= sizeof(words) ? sizeof(long double) : sizeof(words));
  m.fields.push_back(words[0]);
  m.fields.push_back(words[1]);
}

long double get_real(const Message& m, std::size_t at) {
  std::uint64_t words[2] = {m.at(at), m.at(at + 1)};
  long double v = 0;
  std::memcpy(&v, words, sizeof(long double) <= sizeof(words) ? sizeof(long double) : sizeof(words));
  return v;
}

struct Extremes {
  long double max_p = -kInf;
  long double min_c = kInf;
  std::int64_t retired = 0;
};

struct Sums {
  long double y = 0;
  long double z = 0;
};

struct Column {
  std::vector<std::pair<std::size_t, double>> packing;   // (row, coef), ascending row
  std::vector<std::pair<std::size_t, double>> covering;
};

class Run {
 public:
  Run(const MixedLP& lp, const SolverOptions& opt) : lp_(lp), opt_(opt) {
    m_ = lp.num_vars;
    np_ = lp.n_p();
    nc_ = lp.n_c();
    n_ = m_ + np_ + nc_;
    faithful_ = opt.mode == ExecutionMode::kFaithful;
    columns_.resize(m_);
    for (std::size_t j = 0; j < np_; ++j) {
      for (const Term& t : lp.packing[j]) columns_[t.var].packing.emplace_back(j, t.coef);
    }
    for (std::size_t j = 0; j < nc_; ++j) {
      for (const Term& t : lp.covering[j]) columns_[t.var].covering.emplace_back(j, t.coef);
    }
    nnz_ = static_cast<std::int64_t>(lp.nonzeros());
  }

  FeasibilityResult solve();

 private:
  NodeId packing_node(std::size_t j) const { return static_cast<NodeId>(m_ + j); }
  NodeId covering_node(std::size_t j) const { return static_cast<NodeId>(m_ + np_ + j); }

  void build_network();
  long double q(long double v) const { return quantizer_ ? (*quantizer_)(v) : v; }
  // Fast-path cost of one aggregation of `bits`-bit values; fixed per run.
  const congest::RoundStats& aggregate_charge(std::uint32_t bits) {
    auto it = aggregate_charges_.find(bits);
    if (it == aggregate_charges_.end()) it = aggregate_charges_.emplace(bits, congest::aggregate_cost(*net_, tree_, bits)).first;
    return it->second;
  }

  std::vector<long double> rows_from_variables(const std::vector<long double>& qx);
  void variables_from_rows(const std::vector<long double>& y, const std::vector<long double>& z,
                           const std::vector<bool>& live, std::vector<long double>& a_sum,
                           std::vector<long double>& b_sum);
  Extremes aggregate_extremes(const std::vector<Extremes>& own);
  Sums aggregate_sums(const std::vector<Sums>& own);
  std::int64_t aggregate_count(const std::vector<std::int64_t>& own);

  template <class T, class Combine>
  T fold(const std::vector<T>& own, Combine combine) const {
    std::vector<T> acc(own);
    for (NodeId v : post_order_) {
      for (NodeId c : tree_.children[v]) acc[v] = combine(acc[v], acc[c]);
    }
    return acc[tree_.root];
  }

  const MixedLP& lp_;
  SolverOptions opt_;
  std::size_t m_ = 0, np_ = 0, nc_ = 0, n_ = 0;
  bool faithful_ = false;
  std::vector<Column> columns_;
  std::unique_ptr<Network> net_;
  BfsTree tree_;
  std::map<std::uint32_t, congest::RoundStats> aggregate_charges_;
  std::int64_t nnz_ = 0;
  std::vector<NodeId> post_order_;
  std::optional<Quantizer> quantizer_;
  std::uint32_t real_bits_ = kRawRealBits;
  std::uint32_t count_bits_ = 1;
  double K_ = 0;
};

void Run::build_network() {
  std::vector<congest::Edge> edges;
  for (std::size_t j = 0; j < np_; ++j) {
    for (const Term& t : lp_.packing[j]) edges.push_back({static_cast<NodeId>(t.var), packing_node(j)});
  }
  for (std::size_t j = 0; j < nc_; ++j) {
    for (const Term& t : lp_.covering[j]) edges.push_back({static_cast<NodeId>(t.var), covering_node(j)});
  }
  // Link components so that global aggregation is possible.
  std::vector<std::size_t> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    std::size_t a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  NodeId previous = congest::kNoNode;
  for (NodeId v = 0; v < n_; ++v) {
    if (find(v) != v) continue;
    if (previous != congest::kNoNode) edges.push_back({previous, v});
    previous = v;
  }
  net_ = std::make_unique<Network>(n_, edges, opt_.network);
  const congest::Leader leader = congest::elect_leader(*net_, opt_.mode);
  tree_ = congest::bfs_tree(*net_, leader.node, opt_.mode);
  std::vector<NodeId> stack{tree_.root};
  std::vector<NodeId> pre;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    pre.push_back(v);
    for (NodeId c : tree_.children[v]) stack.push_back(c);
  }
  post_order_.assign(pre.rbegin(), pre.rend());
  count_bits_ = congest::ceil_log2(n_ + 1) + 1;
}

std::vector<long double> Run::rows_from_variables(const std::vector<long double>& qx) {
  std::vector<long double> r(np_ + nc_, 0);
  if (!faithful_) {
    for (std::size_t j = 0; j < np_; ++j) {
      for (const Term& t : lp_.packing[j]) r[j] += static_cast<long double>(t.coef) * qx[t.var];
    }
    for (std::size_t j = 0; j < nc_; ++j) {
      for (const Term& t : lp_.covering[j]) r[np_ + j] += static_cast<long double>(t.coef) * qx[t.var];
    }
    net_->charge(congest::uniform_exchange_cost(*net_, nnz_, real_bits_));
    return r;
  }
  congest::Outgoing out(n_);
  for (std::size_t i = 0; i < m_; ++i) {
    Message msg;
    put_real(msg, qx[i]);
    msg.bits = real_bits_;
    for (const auto& [j, coef] : columns_[i].packing) out[i].emplace_back(packing_node(j), msg);
    for (const auto& [j, coef] : columns_[i].covering) out[i].emplace_back(covering_node(j), msg);
  }
  const auto inboxes = congest::exchange(*net_, out, ExecutionMode::kFaithful);
  auto accumulate = [&](const Row& row, NodeId node, long double& acc) {
    const auto& inbox = inboxes[node];
    if (inbox.size() != row.size()) throw std::logic_error("row received an unexpected message count");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (inbox[k].first != row[k].var) throw std::logic_error("row inbox out of order");
      acc += static_cast<long double>(row[k].coef) * get_real(inbox[k].second, 0);
    }
  };
  for (std::size_t j = 0; j < np_; ++j) accumulate(lp_.packing[j], packing_node(j), r[j]);
  for (std::size_t j = 0; j < nc_; ++j) accumulate(lp_.covering[j], covering_node(j), r[np_ + j]);
  return r;
}

void Run::variables_from_rows(const std::vector<long double>& y, const std::vector<long double>& z,
                              const std::vector<bool>& live, std::vector<long double>& a_sum,
                              std::vector<long double>& b_sum) {
  a_sum.assign(m_, 0);
  b_sum.assign(m_, 0);
  if (!faithful_) {
    std::int64_t edges = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& [j, coef] : columns_[i].packing) {
        a_sum[i] += q(static_cast<long double>(coef) * y[j]);
        ++edges;
      }
      for (const auto& [j, coef] : columns_[i].covering) {
        if (!live[j]) continue;
        b_sum[i] += q(static_cast<long double>(coef) * z[j]);
        ++edges;
      }
    }
    net_->charge(congest::uniform_exchange_cost(*net_, edges, real_bits_));
    return;
  }
  congest::Outgoing out(n_);
  for (std::size_t j = 0; j < np_; ++j) {
    for (const Term& t : lp_.packing[j]) {
      Message msg;
      put_real(msg, q(static_cast<long double>(t.coef) * y[j]));
      msg.bits = real_bits_;
      out[packing_node(j)].emplace_back(static_cast<NodeId>(t.var), std::move(msg));
    }
  }
  for (std::size_t j = 0; j < nc_; ++j) {
    if (!live[j]) continue;
    for (const Term& t : lp_.covering[j]) {
      Message msg;
      put_real(msg, q(static_cast<long double>(t.coef) * z[j]));
      msg.bits = real_bits_;
      out[covering_node(j)].emplace_back(static_cast<NodeId>(t.var), std::move(msg));
    }
  }
  const auto inboxes = congest::exchange(*net_, out, ExecutionMode::kFaithful);
  for (std::size_t i = 0; i < m_; ++i) {
    for (const auto& [sender, msg] : inboxes[i]) {
      if (sender < packing_node(0) + np_ && sender >= m_) {
        a_sum[i] += get_real(msg, 0);
      } else {
        b_sum[i] += get_real(msg, 0);
      }
    }
  }
}

Extremes Run::aggregate_extremes(const std::vector<Extremes>& own) {
  auto combine = [](const Extremes& a, const Extremes& b) {
    return Extremes{std::max(a.max_p, b.max_p), std::min(a.min_c, b.min_c), a.retired + b.retired};
  };
  const std::uint32_t bits = 2 * real_bits_ + count_bits_;
  if (!faithful_) {
    net_->charge(aggregate_charge(bits));
    return fold(own, combine);
  }
  congest::Codec<Extremes> codec;
  codec.bits = bits;
  codec.encode = [](const Extremes& e) {
    Message m;
    put_real(m, e.max_p);
    put_real(m, e.min_c);
    m.fields.push_back(static_cast<std::uint64_t>(e.retired));
    return m;
  };
  codec.decode = [](const Message& m) {
    return Extremes{get_real(m, 0), get_real(m, 2), static_cast<std::int64_t>(m.at(4))};
  };
  return congest::aggregate<Extremes>(*net_, tree_, own, combine, codec, ExecutionMode::kFaithful);
}

Sums Run::aggregate_sums(const std::vector<Sums>& own) {
  auto combine = [this](const Sums& a, const Sums& b) {
    return Sums{a.y + b.y > 0 ? q(a.y + b.y) : 0, a.z + b.z > 0 ? q(a.z + b.z) : 0};
  };
  const std::uint32_t bits = 2 * real_bits_;
  if (!faithful_) {
    net_->charge(aggregate_charge(bits));
    return fold(own, combine);
  }
  congest::Codec<Sums> codec;
  codec.bits = bits;
  codec.encode = [](const Sums& s) {
    Message m;
    put_real(m, s.y);
    put_real(m, s.z);
    return m;
  };
  codec.decode = [](const Message& m) { return Sums{get_real(m, 0), get_real(m, 2)}; };
  return congest::aggregate<Sums>(*net_, tree_, own, combine, codec, ExecutionMode::kFaithful);
}

std::int64_t Run::aggregate_count(const std::vector<std::int64_t>& own) {
  auto combine = [](std::int64_t a, std::int64_t b) { return a + b; };
  if (!faithful_) {
    net_->charge(aggregate_charge(count_bits_));
    return fold(own, combine);
  }
  return congest::aggregate<std::int64_t>(*net_, tree_, own, combine,
                                          congest::integer_codec(count_bits_), ExecutionMode::kFaithful);
}

FeasibilityResult Run::solve() {
  FeasibilityResult res;
  if (!(opt_.eps > 0 && opt_.eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
  if (opt_.eps < min_epsilon(n_)) {
    throw std::invalid_argument("eps below 1/poly(n); use the exact LP oracle for this accuracy");
  }
  if (m_ == 0) throw std::invalid_argument("LP has no variables");
  if (std::none_of(lp_.packing.begin(), lp_.packing.end(), [](const Row& r) { return !r.empty(); })) {
    throw std::invalid_argument("LP needs at least one packing row with support");
  }
  if (nc_ == 0) throw std::invalid_argument("LP needs at least one covering row");

  K_ = 10.0 * std::log(static_cast<double>(n_)) / opt_.eps;
  res.K = K_;
  res.iteration_cap = opt_.max_iterations > 0 ? opt_.max_iterations : iteration_cap(n_, m_, opt_.eps, opt_.c_R);

  for (std::size_t j = 0; j < nc_; ++j) {
    if (lp_.covering[j].empty()) {
      res.reason = InfeasibleReason::kEmptyCoveringRow;
      res.empty_row = j;
      return res;
    }
  }

  // Initial point and the range of every value that is ever transmitted.
  std::vector<long double> x(m_);
  double min_coef = std::numeric_limits<double>::infinity(), max_coef = 0;
  for (const auto* rows : {&lp_.packing, &lp_.covering}) {
    for (const Row& r : *rows) {
      for (const Term& t : r) {
        min_coef = std::min(min_coef, t.coef);
        max_coef = std::max(max_coef, t.coef);
      }
    }
  }
  long double min_x0 = kInf;
  for (std::size_t i = 0; i < m_; ++i) {
    double norm = 0;
    for (const auto& [j, coef] : columns_[i].packing) norm = std::max(norm, coef);
    if (norm == 0) {
      for (const auto& [j, coef] : columns_[i].covering) norm = std::max(norm, coef);
    }
    x[i] = 1.0L / (static_cast<long double>(m_) * norm);
    min_x0 = std::min(min_x0, x[i]);
  }

  if (opt_.strict_bits) {
    const double delta = opt_.eps / (200.0 * opt_.c_quant * static_cast<double>(res.iteration_cap));
    quantizer_.emplace(delta);
    const long double log_range = K_ + 4 + std::log(static_cast<long double>(n_) + 1) +
                                  std::fabs(std::log(static_cast<long double>(min_coef))) +
                                  std::fabs(std::log(static_cast<long double>(max_coef))) +
                                  std::fabs(std::log(min_x0)) + std::log(static_cast<long double>(K_) + 1);
    real_bits_ = quantizer_->width_for(log_range);
  }
  res.value_bits = real_bits_;

  build_network();
  if (opt_.charge_parameter_discovery) {
    net_->charge(congest::aggregate_cost(*net_, tree_, 3 * count_bits_));
  }

  std::vector<long double> qx(m_), y(np_), z(nc_), a_sum, b_sum;
  std::vector<bool> live(nc_, true);
  const long double threshold = 1.0L - static_cast<long double>(opt_.eps) / 50;
  std::int64_t t = 0;
  while (true) {
    for (std::size_t i = 0; i < m_; ++i) qx[i] = q(x[i]);
    const std::vector<long double> r = rows_from_variables(qx);

    std::vector<Extremes> own(n_);
    for (std::size_t j = 0; j < np_; ++j) own[packing_node(j)].max_p = r[j] > 0 ? q(r[j]) : 0;
    for (std::size_t j = 0; j < nc_; ++j) {
      live[j] = r[np_ + j] < K_;
      if (live[j]) {
        own[covering_node(j)].min_c = q(r[np_ + j]);
      } else {
        own[covering_node(j)].retired = 1;
      }
    }
    const Extremes ext = aggregate_extremes(own);
    res.max_packing = ext.max_p;
    res.min_covering = ext.min_c;

    if (ext.max_p >= K_ || ext.retired == static_cast<std::int64_t>(nc_)) {
      res.verdict = Verdict::kFeasible;
      res.x.resize(m_);
      for (std::size_t i = 0; i < m_; ++i) res.x[i] = static_cast<double>(x[i] / K_);
      break;
    }
    if (t >= res.iteration_cap) {
      res.reason = InfeasibleReason::kIterationCap;
      break;
    }

    // Shifted exponentials keep every value in (0, 1]; the gradients
    // a_i and b_i are invariant under the shift.
    std::vector<Sums> contrib(n_);
    for (std::size_t j = 0; j < np_; ++j) {
      y[j] = std::exp(r[j] - ext.max_p);
      if (!std::isfinite(y[j])) throw std::logic_error("packing exponential overflowed");
      contrib[packing_node(j)].y = q(y[j]);
    }
    for (std::size_t j = 0; j < nc_; ++j) {
      z[j] = live[j] ? std::exp(ext.min_c - r[np_ + j]) : 0;
      if (!std::isfinite(z[j])) throw std::logic_error("covering exponential overflowed");
      if (live[j]) contrib[covering_node(j)].z = q(z[j]);
    }
    variables_from_rows(y, z, live, a_sum, b_sum);
    const Sums sums = aggregate_sums(contrib);

    std::vector<long double> delta(m_, 0);
    std::vector<std::int64_t> stuck(n_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      const long double a = sums.y > 0 ? a_sum[i] / sums.y : 0;
      const long double b = sums.z > 0 ? b_sum[i] / sums.z : 0;
      if (b > 0 && a <= threshold * b) {
        delta[i] = 0.5L * (1 - a / b);
      } else {
        stuck[i] = 1;
      }
    }
    const std::int64_t stuck_count = aggregate_count(stuck);
    if (stuck_count == static_cast<std::int64_t>(m_)) {
      res.reason = InfeasibleReason::kNoImprovableVariable;
      if (opt_.certify_stalled_point && ext.max_p <= (1.0L + opt_.eps) * ext.min_c) {
        std::vector<double> candidate(m_);
        for (std::size_t i = 0; i < m_; ++i) candidate[i] = static_cast<double>(x[i] / ext.min_c);
        if (satisfies_feasibility(lp_, candidate, opt_.eps)) {
          res.verdict = Verdict::kFeasible;
          res.reason = InfeasibleReason::kNone;
          res.stalled_point_certified = true;
          res.x = std::move(candidate);
        }
      }
      break;
    }
    for (std::size_t i = 0; i < m_; ++i) x[i] *= 1 + delta[i] / K_;
    ++t;
  }
  res.iterations = t;
  if (res.verdict == Verdict::kFeasible) {
    const RowExtremes e = evaluate(lp_, res.x);
    res.max_packing = e.max_packing;
    res.min_covering = e.min_covering;
  }
  res.stats = net_->stats();
  res.budget_violations = static_cast<std::int64_t>(net_->violations().size());
  return res;
}

}  // namespace

double min_epsilon(std::size_t n) {
  const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
  return std::min(1e-3, 1.0 / (nn * nn * nn));
}

std::int64_t iteration_cap(std::size_t n, std::size_t m, double eps, double c_R) {
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  const double ln_m = std::log(std::max(static_cast<double>(m) / eps, 2.0));
  const double r = c_R * ln_n * ln_n * ln_m / (eps * eps * eps);
  return static_cast<std::int64_t>(std::min(std::ceil(r), 9.0e18));
}

FeasibilityResult solve_feasibility(const MixedLP& lp, const SolverOptions& options) {
  MixedLP canonical = lp;
  canonical.canonicalize();
  Run run(canonical, options);
  return run.solve();
}

MaxResult solve_max(const MixedLP& rows, std::span<const double> p, std::span<const double> c,
                    const SolverOptions& options) {
  if (!(options.eps > 0 && options.eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
  const MixedLP lp = normalize(rows, p, c);
  MaxResult out;
  out.x.assign(lp.num_vars, 0);
  for (std::size_t j = 0; j < lp.n_c(); ++j) {
    if (lp.covering[j].empty()) {
      out.zero_row = true;
      out.witness_row = j;
      return out;
    }
  }

  std::vector<double> column_pmax(lp.num_vars, 0), column_cmax(lp.num_vars, 0);
  for (const Row& r : lp.packing) {
    for (const Term& t : r) column_pmax[t.var] = std::max(column_pmax[t.var], t.coef);
  }
  for (const Row& r : lp.covering) {
    for (const Term& t : r) column_cmax[t.var] = std::max(column_cmax[t.var], t.coef);
  }
  // Row j forces some x_i >= 1 / (|C_j| c_ji), which costs a packing row
  // at least pmax_i x_i.
  double lo = 0;
  for (const Row& r : lp.covering) {
    double row_bound = std::numeric_limits<double>::infinity();
    for (const Term& t : r) {
      row_bound = std::min(row_bound, column_pmax[t.var] / (static_cast<double>(r.size()) * t.coef));
    }
    lo = std::max(lo, row_bound);
  }
  if (lo == 0) {
    out.unbounded = true;
    out.gamma = std::numeric_limits<double>::infinity();
    return out;
  }

  std::vector<double> x0(lp.num_vars);
  for (std::size_t i = 0; i < lp.num_vars; ++i) {
    const double norm = column_pmax[i] > 0 ? column_pmax[i] : column_cmax[i];
    x0[i] = 1.0 / (static_cast<double>(lp.num_vars) * norm);
  }
  RowExtremes e0 = evaluate(lp, x0);
  double hi = static_cast<double>(e0.max_packing / e0.min_covering);
  std::vector<double> best(x0);
  for (double& v : best) v = static_cast<double>(v / e0.min_covering);

  const double e_min = std::cbrt(1 + options.eps) - 1;
  SolverOptions sub = options;
  while (hi > (1 + options.eps) * lo && out.subproblems < 200) {
    const double ratio = hi / lo;
    const double e = std::clamp(std::pow(ratio, 0.25) - 1, e_min, 0.5);
    const double lambda = std::sqrt(lo * hi);
    MixedLP scaled = lp;
    for (Row& r : scaled.packing) {
      for (Term& t : r) t.coef /= lambda;
    }
    sub.eps = e;
    const FeasibilityResult res = solve_feasibility(scaled, sub);
    ++out.subproblems;
    out.stats += res.stats;
    if (res.verdict == Verdict::kFeasible) {
      const RowExtremes ex = evaluate(lp, res.x);
      const double achieved = static_cast<double>(ex.max_packing / ex.min_covering);
      if (achieved < hi) {
        hi = achieved;
        for (std::size_t i = 0; i < best.size(); ++i) best[i] = static_cast<double>(res.x[i] / ex.min_covering);
      }
      // Guarantees progress even if rounding made `achieved` barely larger.
      hi = std::min(hi, std::max(achieved, lo));
    } else if (res.reason == InfeasibleReason::kNoImprovableVariable) {
      lo = std::max(lo, (1 - e / 50) * lambda);
    } else {
      break;
    }
  }
  out.lambda_lower = lo;
  out.lambda_upper = hi;
  out.gamma = 1 / hi;
  out.x.resize(best.size());
  for (std::size_t i = 0; i < best.size(); ++i) out.x[i] = best[i] / hi;
  return out;
}

std::string to_string(Verdict v) { return v == Verdict::kFeasible ? "feasible" : "infeasible"; }

std::string to_string(InfeasibleReason r) {
  switch (r) {
    case InfeasibleReason::kNone: return "none";
    case InfeasibleReason::kNoImprovableVariable: return "no-improvable-variable";
    case InfeasibleReason::kIterationCap: return "iteration-cap";
    case InfeasibleReason::kEmptyCoveringRow: return "empty-covering-row";
  }
  return "unknown";
}

}  // namespace santa::lp
