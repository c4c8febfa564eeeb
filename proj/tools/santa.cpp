#include <chrono>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "santa/alloc/instance.hpp"
#include "santa/alloc/pipeline.hpp"
#include "santa/common/numbers.hpp"
#include "santa/congest/round_stats.hpp"
#include "santa/lp/lp_io.hpp"
#include "santa/lp/solver.hpp"
#include "santa/oracles/generators.hpp"
#include "santa/oracles/verify.hpp"
#include "santa/rounding/cycle_rounding.hpp"

namespace {

using json = nlohmann::ordered_json;
using santa::Rational;
namespace alloc = santa::alloc;
namespace congest = santa::congest;
namespace lp = santa::lp;
namespace oracles = santa::oracles;
namespace rounding = santa::rounding;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;

// Malformed input files and failed runs; exit code 2.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { kCsv, kJson };

struct Global {
  std::optional<std::uint64_t> seed;
  double eps = 0.5;
  bool strict_bits = false;
  std::string out;
  Format format = Format::kCsv;
  double beta_const = 1.0;
  std::string mode = "fast";
  std::uint32_t bandwidth_const = 8;
};

congest::ExecutionMode parse_mode(const std::string& mode) {
  return mode == "faithful" ? congest::ExecutionMode::kFaithful : congest::ExecutionMode::kFastPath;
}

std::uint64_t seed_or_zero(const Global& g) { return g.seed.value_or(0); }

json stats_json(const congest::StatsLog& log) {
  json rows = json::array();
  auto row = [](const std::string& phase, const congest::RoundStats& s) {
    return json{{"phase", phase},
                {"rounds", s.rounds_elapsed},
                {"max_edge_bits", s.max_bits_on_any_edge_per_round},
                {"messages", s.total_messages},
                {"violations", s.budget_violations}};
  };
  for (const auto& r : log.records()) rows.push_back(row(r.phase, r.stats));
  rows.push_back(row("total", log.total()));
  return json{{"schema", congest::kStatsSchemaVersion}, {"rows", rows}};
}

std::string str(const Rational& r) { return santa::to_string(r); }

// Writes `body` to the --out path, or to stdout when none is given.
void emit(const Global& g, const std::string& body) {
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + g.out);
  file << body;
}

void write_artifact(const std::string& path, const std::string& body) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << body;
}

alloc::InstanceDocument load_instance(const std::string& path) {
  try {
    return alloc::read_instance_file(path);
  } catch (const std::runtime_error& e) {
    throw InvalidInput(e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

// --- generate ---------------------------------------------------------------

struct GenerateOpts {
  std::size_t n = 16;
  std::string a, b;
  std::string variant = "I1";
  std::size_t children = 4, gifts = 6;
  std::int64_t lo = 1, hi = 10;
  double density = 0.5;
  std::size_t k = 3;
  std::int64_t T = 6;
  oracles::MixedSpec mixed;
};

std::string bits_from(santa::Rng& rng, std::size_t s) {
  std::string bits(s, '0');
  for (auto& ch : bits) ch = rng.below(2) ? '1' : '0';
  return bits;
}

std::string render(const alloc::Instance& inst, std::span<const alloc::FractionalEntry> frac = {}) {
  std::ostringstream out;
  alloc::write_instance(out, inst, frac);
  return out.str();
}

int cmd_generate_scn(const Global& g, const GenerateOpts& o) {
  std::string a = o.a, b = o.b;
  if (a.empty() || b.empty()) {
    if (!g.seed) throw CLI::ValidationError("--seed", "required when --a or --b is omitted");
    std::size_t s = 0;
    while ((s + 1) * (s + 1) <= o.n) ++s;
    santa::Rng rng(*g.seed);
    const std::string ra = bits_from(rng, s), rb = bits_from(rng, s);
    if (a.empty()) a = ra;
    if (b.empty()) b = rb;
  }
  alloc::Instance inst;
  try {
    inst = oracles::gen_scn(o.n, a, b);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("scn", e.what());
  }
  emit(g, "# scn " + std::to_string(o.n) + " a=" + a + " b=" + b + "\n" + render(inst));
  return kExitOk;
}

int cmd_generate_path(const Global& g, const GenerateOpts& o) {
  if (o.n < 1) throw CLI::ValidationError("--n", "must be positive");
  oracles::PathVariant v;
  try {
    v = oracles::parse_path_variant(o.variant);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--variant", e.what());
  }
  emit(g, render(oracles::gen_path(v, o.n)));
  return kExitOk;
}

int cmd_generate_random(const Global& g, const GenerateOpts& o) {
  if (!g.seed) throw CLI::ValidationError("--seed", "required for random instances");
  if (o.lo < 0 || o.hi < o.lo) throw CLI::ValidationError("--lo/--hi", "need 0 <= lo <= hi");
  if (o.density < 0 || o.density > 1) throw CLI::ValidationError("--density", "must lie in [0, 1]");
  oracles::RandomSpec spec;
  spec.children = o.children;
  spec.gifts = o.gifts;
  spec.value_lo = o.lo;
  spec.value_hi = o.hi;
  spec.density = o.density;
  spec.seed = *g.seed;
  emit(g, render(oracles::gen_random(spec)));
  return kExitOk;
}

int cmd_generate_mixed(const Global& g, const GenerateOpts& o) {
  if (!g.seed) throw CLI::ValidationError("--seed", "required for mixed instances");
  auto spec = o.mixed;
  spec.seed = *g.seed;
  try {
    emit(g, render(oracles::gen_mixed(spec)));
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("mixed", e.what());
  }
  return kExitOk;
}

int cmd_generate_sparsify(const Global& g, const GenerateOpts& o) {
  alloc::InstanceDocument doc;
  try {
    doc = oracles::gen_sparsification_example(o.k, o.T);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("sparsify", e.what());
  }
  emit(g, render(doc.instance, doc.fractional));
  return kExitOk;
}

// --- solve ------------------------------------------------------------------

struct SolveOpts {
  std::string instance;
  std::string stats;
  std::int64_t beta = 0;
  int max_retries = 3;
};

alloc::PipelineConfig pipeline_config(const Global& g, std::int64_t beta, int max_retries) {
  alloc::PipelineConfig config;
  config.seed = seed_or_zero(g);
  config.eps = g.eps;
  config.beta_const = g.beta_const;
  config.beta = beta;
  config.max_retries = max_retries;
  config.strict_bits = g.strict_bits;
  config.mode = parse_mode(g.mode);
  config.network.bandwidth_constant = g.bandwidth_const;
  return config;
}

int cmd_solve(const Global& g, const SolveOpts& o) {
  const auto doc = load_instance(o.instance);
  const auto config = pipeline_config(g, o.beta, o.max_retries);
  const alloc::SolveResult res = alloc::solve(doc.instance, config);
  const auto report = oracles::verify_assignment(doc.instance, res.assignment);
  const bool ok = report.valid && res.audit.valid;

  std::ostringstream assignment;
  alloc::write_assignment(assignment, res.assignment);
  if (!g.out.empty()) write_artifact(g.out, assignment.str());
  std::ostringstream stats_csv;
  congest::write_stats_csv(stats_csv, o.instance, res.stats);
  if (!o.stats.empty()) write_artifact(o.stats, stats_csv.str());

  if (g.format == Format::kJson) {
    json pairs = json::array();
    for (const auto& a : res.assignment) pairs.push_back({a.gift, a.child});
    json doc_out{{"instance", o.instance},
                 {"valid", ok},
                 {"value", str(res.value)},
                 {"T", str(res.T)},
                 {"alpha", str(res.alpha)},
                 {"beta", res.beta},
                 {"retries", res.retries},
                 {"fallbacks", res.fallbacks},
                 {"probes", res.probes.size()},
                 {"assignment", pairs},
                 {"stats", stats_json(res.stats)}};
    if (!ok) doc_out["error"] = report.valid ? res.audit.failure : report.error;
    std::cout << doc_out.dump(2) << '\n';
  } else {
    std::cout << "# summary\nkey,value\n"
              << "valid," << (ok ? "true" : "false") << '\n'
              << "value," << str(res.value) << '\n'
              << "T," << str(res.T) << '\n'
              << "alpha," << str(res.alpha) << '\n'
              << "beta," << res.beta << '\n'
              << "retries," << res.retries << '\n'
              << "fallbacks," << res.fallbacks << '\n'
              << "probes," << res.probes.size() << '\n'
              << "# stats\n"
              << stats_csv.str();
    if (g.out.empty()) std::cout << "# assignment\n" << assignment.str();
  }
  if (!ok) {
    std::cerr << "santa: invalid assignment: " << (report.valid ? res.audit.failure : report.error) << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

// --- lp-solve ---------------------------------------------------------------

struct LpOpts {
  std::string file;
  bool max_form = false;
  double c_R = 1000;
  std::int64_t max_iterations = 0;
  std::string stats;
};

lp::SolverOptions solver_options(const Global& g, const LpOpts& o) {
  lp::SolverOptions opt;
  opt.eps = g.eps;
  opt.c_R = o.c_R;
  opt.strict_bits = g.strict_bits;
  opt.mode = parse_mode(g.mode);
  opt.network.bandwidth_constant = g.bandwidth_const;
  opt.max_iterations = o.max_iterations;
  return opt;
}

int cmd_lp_solve(const Global& g, const LpOpts& o) {
  lp::LpFile file;
  try {
    file = lp::read_lp_file(o.file);
  } catch (const std::exception& e) {
    throw InvalidInput(e.what());
  }
  const auto options = solver_options(g, o);
  if (g.eps <= 0 || g.eps >= 1) throw CLI::ValidationError("--eps", "must lie in (0, 1)");

  json out{{"file", o.file}, {"eps", g.eps}};
  congest::StatsLog log;
  bool ok = true;
  std::vector<double> x;
  try {
    if (o.max_form) {
      const auto res = lp::solve_max(file.rows, file.p, file.c, options);
      ok = !res.zero_row;
      x = res.x;
      out["gamma"] = res.gamma;
      out["lambda_lower"] = res.lambda_lower;
      out["lambda_upper"] = res.lambda_upper;
      out["zero_row"] = res.zero_row;
      out["unbounded"] = res.unbounded;
      out["subproblems"] = res.subproblems;
      out["verdict"] = ok ? "feasible" : "infeasible";
      log.add("lp_max", res.stats);
    } else {
      const lp::MixedLP normalized = lp::normalize(file.rows, file.p, file.c);
      const auto res = lp::solve_feasibility(normalized, options);
      ok = res.verdict == lp::Verdict::kFeasible;
      x = res.x;
      out["verdict"] = lp::to_string(res.verdict);
      out["reason"] = lp::to_string(res.reason);
      out["iterations"] = res.iterations;
      out["iteration_cap"] = res.iteration_cap;
      out["max_packing"] = static_cast<double>(res.max_packing);
      out["min_covering"] = static_cast<double>(res.min_covering);
      out["value_bits"] = res.value_bits;
      log.add("lp_feasibility", res.stats);
    }
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  out["x"] = x;

  std::ostringstream stats_csv;
  congest::write_stats_csv(stats_csv, o.file, log);
  if (!o.stats.empty()) write_artifact(o.stats, stats_csv.str());

  std::ostringstream body;
  if (g.format == Format::kJson) {
    out["stats"] = stats_json(log);
    body << out.dump(2) << '\n';
  } else {
    body << "# summary\nkey,value\n";
    for (auto it = out.begin(); it != out.end(); ++it) {
      if (it.key() == "x") continue;
      body << it.key() << ',' << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
    body << "# x\nvar,value\n";
    body.precision(17);
    for (std::size_t i = 0; i < x.size(); ++i) body << i << ',' << x[i] << '\n';
    body << "# stats\n" << stats_csv.str();
  }
  emit(g, body.str());
  return ok ? kExitOk : kExitInvalid;
}

// --- cycle-round ------------------------------------------------------------

struct CycleOpts {
  std::string instance;
  bool float_mode = false;
  std::string stats;
};

template <class W>
W weight_of(const Rational& r);
template <>
Rational weight_of<Rational>(const Rational& r) {
  return r;
}
template <>
double weight_of<double>(const Rational& r) {
  return r.get_d();
}

template <class W>
int round_document(const Global& g, const CycleOpts& o, const alloc::InstanceDocument& doc) {
  const alloc::Instance& inst = doc.instance;
  std::vector<rounding::Edge> edges;
  std::vector<W> w;
  for (const auto& f : doc.fractional) {
    if (f.weight < 0 || f.weight > 1) throw InvalidInput("frac weights must lie in [0, 1]");
    edges.push_back({inst.child_node(f.child), inst.gift_node(f.gift)});
    w.push_back(weight_of<W>(f.weight));
  }
  rounding::RoundingConfig config;
  config.seed = seed_or_zero(g);
  rounding::RoundingResult<W> res;
  try {
    res = rounding::round_cycles<W>(inst.num_nodes(), edges, w, config);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  const std::vector<W> caps(edges.size(), W(1));
  const bool forest = rounding::fractional_part_is_forest<W>(inst.num_nodes(), edges, res.w, caps);
  std::size_t fractional = 0;
  std::vector<alloc::FractionalEntry> rounded;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!rounding::is_integral(res.w[e], W(1), config.tolerance)) ++fractional;
    rounded.push_back({doc.fractional[e].child, doc.fractional[e].gift, santa::rational_from_double(0)});
    if constexpr (std::is_same_v<W, Rational>) {
      rounded.back().weight = res.w[e];
    } else {
      rounded.back().weight = santa::rational_from_double(res.w[e]);
    }
  }
  emit(g, render(inst, rounded));

  std::ostringstream stats_csv;
  congest::write_stats_csv(stats_csv, o.instance, res.stats);
  if (!o.stats.empty()) write_artifact(o.stats, stats_csv.str());
  // The rounded document owns stdout unless --out is given.
  if (!g.out.empty()) {
    if (g.format == Format::kJson) {
      std::cout << json{{"instance", o.instance},
                        {"edges", edges.size()},
                        {"fractional_after", fractional},
                        {"iterations", res.iterations.size()},
                        {"forest", forest},
                        {"stats", stats_json(res.stats)}}
                       .dump(2)
                << '\n';
    } else {
      std::cout << "# summary\nkey,value\nedges," << edges.size() << "\nfractional_after," << fractional
                << "\niterations," << res.iterations.size() << "\nforest," << (forest ? "true" : "false")
                << "\n# stats\n"
                << stats_csv.str();
    }
  }
  return forest ? kExitOk : kExitInvalid;
}

int cmd_cycle_round(const Global& g, const CycleOpts& o) {
  const auto doc = load_instance(o.instance);
  return o.float_mode ? round_document<double>(g, o, doc) : round_document<Rational>(g, o, doc);
}

// --- verify -----------------------------------------------------------------

struct VerifyOpts {
  std::string instance, assignment;
};

int cmd_verify(const Global& g, const VerifyOpts& o) {
  const auto doc = load_instance(o.instance);
  alloc::Assignment a;
  try {
    a = alloc::read_assignment_file(o.assignment);
  } catch (const std::exception& e) {
    throw InvalidInput(e.what());
  }
  const auto report = oracles::verify_assignment(doc.instance, a);
  std::ostringstream body;
  if (g.format == Format::kJson) {
    json values = json::array();
    for (const auto& v : report.child_values) values.push_back(str(v));
    json out{{"valid", report.valid}, {"min_value", str(report.min_value)}, {"child_values", values}};
    if (!report.valid) out["error"] = report.error;
    body << out.dump(2) << '\n';
  } else {
    body << "key,value\nvalid," << (report.valid ? "true" : "false") << '\n';
    if (report.valid) {
      body << "min_value," << str(report.min_value) << '\n';
    } else {
      body << "error,\"" << report.error << "\"\n";
    }
  }
  emit(g, body.str());
  return report.valid ? kExitOk : kExitInvalid;
}

// --- bench ------------------------------------------------------------------

struct BenchOpts {
  std::string family = "scn";
  std::vector<std::size_t> sizes{16, 64, 256};
  int trials = 1;
  int jobs = 1;
  double density = 0.3;
  std::string bits = "ones";
};

struct BenchRow {
  std::size_t n = 0;
  int trial = 0;
  std::size_t nodes = 0;
  Rational value, T, alpha;
  congest::RoundStats lp, total;
  double seconds = 0;
};

alloc::Instance bench_instance(const BenchOpts& o, std::size_t n, std::uint64_t seed) {
  santa::Rng rng(seed);
  if (o.family == "scn") {
    std::size_t s = 0;
    while ((s + 1) * (s + 1) <= n) ++s;
    if (o.bits == "ones") return oracles::gen_scn(n, std::string(s, '1'), std::string(s, '1'));
    const std::string a = bits_from(rng, s), b = bits_from(rng, s);
    return oracles::gen_scn(n, a, b);
  }
  if (o.family == "path") return oracles::gen_path(oracles::PathVariant::kI2, n);
  oracles::RandomSpec spec;
  spec.children = n;
  spec.gifts = n + n / 2;
  spec.density = o.density;
  spec.seed = seed;
  return oracles::gen_random(spec);
}

BenchRow bench_one(const Global& g, const BenchOpts& o, std::size_t n, int trial) {
  const std::uint64_t seed = santa::Rng::derive(santa::Rng::derive(seed_or_zero(g), n), static_cast<std::uint64_t>(trial));
  const alloc::Instance inst = bench_instance(o, n, seed);
  auto config = pipeline_config(g, 0, 3);
  config.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const auto res = alloc::solve(inst, config);
  BenchRow row;
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  row.n = n;
  row.trial = trial;
  row.nodes = inst.num_nodes();
  row.value = res.value;
  row.T = res.T;
  row.alpha = res.alpha;
  row.total = res.stats.total();
  for (const auto& r : res.stats.records()) {
    if (r.phase.rfind("search", 0) == 0) row.lp += r.stats;
  }
  return row;
}

int cmd_bench(const Global& g, const BenchOpts& o) {
  if (o.family != "scn" && o.family != "path" && o.family != "random") {
    throw CLI::ValidationError("--family", "expected scn, path or random");
  }
  if (o.family == "scn") {
    for (std::size_t n : o.sizes) {
      std::size_t s = 0;
      while ((s + 1) * (s + 1) <= n) ++s;
      if (s * s != n) throw CLI::ValidationError("--sizes", "scn sizes must be perfect squares");
    }
  }
  // Each worker owns its instance and simulation; rows are collected in
  // submission order so the output does not depend on --jobs.
  std::vector<std::pair<std::size_t, int>> tasks;
  for (std::size_t n : o.sizes) {
    for (int t = 0; t < o.trials; ++t) tasks.emplace_back(n, t);
  }
  std::vector<BenchRow> rows(tasks.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, o.jobs));
  for (std::size_t begin = 0; begin < tasks.size(); begin += jobs) {
    std::vector<std::future<BenchRow>> pending;
    for (std::size_t i = begin; i < std::min(tasks.size(), begin + jobs); ++i) {
      pending.push_back(std::async(std::launch::async, bench_one, std::cref(g), std::cref(o), tasks[i].first,
                                   tasks[i].second));
    }
    for (std::size_t i = 0; i < pending.size(); ++i) rows[begin + i] = pending[i].get();
  }

  std::ostringstream body;
  if (g.format == Format::kJson) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"family", o.family},
                     {"n", r.n},
                     {"trial", r.trial},
                     {"nodes", r.nodes},
                     {"T", str(r.T)},
                     {"value", str(r.value)},
                     {"alpha", str(r.alpha)},
                     {"lp_rounds", r.lp.rounds_elapsed},
                     {"rounds", r.total.rounds_elapsed},
                     {"max_edge_bits", r.total.max_bits_on_any_edge_per_round},
                     {"messages", r.total.total_messages},
                     {"violations", r.total.budget_violations},
                     {"seconds", r.seconds}});
    }
    body << json{{"schema", congest::kStatsSchemaVersion}, {"rows", arr}}.dump(2) << '\n';
  } else {
    body << "family,n,trial,nodes,T,value,alpha,lp_rounds,rounds,max_edge_bits,messages,violations,seconds\n";
    for (const auto& r : rows) {
      body << o.family << ',' << r.n << ',' << r.trial << ',' << r.nodes << ',' << str(r.T) << ',' << str(r.value)
           << ',' << str(r.alpha) << ',' << r.lp.rounds_elapsed << ',' << r.total.rounds_elapsed << ','
           << r.total.max_bits_on_any_edge_per_round << ',' << r.total.total_messages << ','
           << r.total.budget_violations << ',' << r.seconds << '\n';
    }
  }
  emit(g, body.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed max-min gift allocation: generators, solvers and verifiers"};
  app.set_config("--config", "", "TOML or INI file with option values");
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  std::string format = "csv";
  app.add_option("--seed", g.seed, "Random seed; required by randomized generators");
  app.add_option("--eps", g.eps, "LP accuracy")->check(CLI::Range(1e-6, 0.999));
  app.add_flag("--strict-bits", g.strict_bits, "Quantize transmitted LP values to the edge budget");
  app.add_option("--out", g.out, "Output file for the primary artifact");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--beta-const", g.beta_const, "Constant in beta = ceil(c ln n / ln ln n)")->check(CLI::PositiveNumber);
  app.add_option("--mode", g.mode, "Simulator mode")->check(CLI::IsMember({"fast", "faithful"}));
  app.add_option("--bandwidth-const", g.bandwidth_const, "Edge budget is c * ceil(log2 n) bits")
      ->check(CLI::Range(1u, 1024u));

  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "Emit an instance file");
  generate->require_subcommand(1);
  auto* scn = generate->add_subcommand("scn", "Set-disjointness network SC_n");
  scn->add_option("--n", gen.n, "Perfect square number of path children")->required();
  scn->add_option("--a", gen.a, "Alice's bit string; random from --seed if omitted");
  scn->add_option("--b", gen.b, "Bob's bit string; random from --seed if omitted");
  auto* path = generate->add_subcommand("path", "Alternating path instance");
  path->add_option("--variant", gen.variant, "I1, I2 or I3");
  path->add_option("--n", gen.n, "Number of children")->required();
  auto* random = generate->add_subcommand("random", "Random bipartite instance");
  random->add_option("--children", gen.children)->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  random->add_option("--gifts", gen.gifts);
  random->add_option("--lo", gen.lo, "Smallest gift value");
  random->add_option("--hi", gen.hi, "Largest gift value");
  random->add_option("--density", gen.density, "Edge probability");
  auto* mixed = generate->add_subcommand("mixed", "Big gifts on child pairs plus unit gifts");
  mixed->add_option("--children", gen.mixed.children);
  mixed->add_option("--big", gen.mixed.big, "Number of big gifts");
  mixed->add_option("--small", gen.mixed.small, "Number of unit gifts");
  mixed->add_option("--small-degree", gen.mixed.small_degree, "Children desiring each unit gift");
  mixed->add_option("--big-value", gen.mixed.big_value);
  auto* sparsify = generate->add_subcommand("sparsify", "Sparsification counterexample with its fractional point");
  sparsify->add_option("--k", gen.k, "Number of children")->required();
  sparsify->add_option("--T", gen.T, "Target value")->required();

  SolveOpts solve_opts;
  auto* solve = app.add_subcommand("solve", "Approximate the max-min allocation");
  solve->add_option("instance", solve_opts.instance)->required()->check(CLI::ExistingFile);
  solve->add_option("--stats", solve_opts.stats, "Write the round-stats CSV here");
  solve->add_option("--beta", solve_opts.beta, "Fixed beta; overrides --beta-const")->check(CLI::NonNegativeNumber);
  solve->add_option("--max-retries", solve_opts.max_retries)->check(CLI::Range(0, 100));

  LpOpts lp_opts;
  auto* lp_solve = app.add_subcommand("lp-solve", "Mixed packing-covering solver");
  lp_solve->add_option("file", lp_opts.file)->required()->check(CLI::ExistingFile);
  lp_solve->add_flag("--max-form", lp_opts.max_form, "Maximize gamma in P x <= p, C x >= gamma c");
  lp_solve->add_option("--c-r", lp_opts.c_R, "Iteration cap constant")->check(CLI::PositiveNumber);
  lp_solve->add_option("--max-iterations", lp_opts.max_iterations)->check(CLI::NonNegativeNumber);
  lp_solve->add_option("--stats", lp_opts.stats, "Write the round-stats CSV here");

  CycleOpts cycle_opts;
  auto* cycle = app.add_subcommand("cycle-round", "Round the frac weights of an instance file to a forest");
  cycle->add_option("instance", cycle_opts.instance)->required()->check(CLI::ExistingFile);
  cycle->add_flag("--float", cycle_opts.float_mode, "Double weights with tolerance 1e-9 instead of exact");
  cycle->add_option("--stats", cycle_opts.stats, "Write the round-stats CSV here");

  VerifyOpts verify_opts;
  auto* verify = app.add_subcommand("verify", "Check an assignment and report the minimum child value");
  verify->add_option("instance", verify_opts.instance)->required()->check(CLI::ExistingFile);
  verify->add_option("assignment", verify_opts.assignment)->required()->check(CLI::ExistingFile);

  BenchOpts bench_opts;
  auto* bench = app.add_subcommand("bench", "Solve generated instances and tabulate rounds against size");
  bench->add_option("--family", bench_opts.family, "scn, path or random");
  bench->add_option("--sizes", bench_opts.sizes, "Instance sizes")->delimiter(',');
  bench->add_option("--trials", bench_opts.trials)->check(CLI::Range(1, 100000));
  bench->add_option("--jobs", bench_opts.jobs, "Parallel workers")->check(CLI::Range(1, 256));
  bench->add_option("--density", bench_opts.density, "Edge probability for the random family");
  bench->add_option("--bits", bench_opts.bits, "SC_n bit strings: all ones (value 1) or random")
      ->check(CLI::IsMember({"ones", "random"}));

  try {
    app.parse(argc, argv);
    g.format = format == "json" ? Format::kJson : Format::kCsv;
    if (scn->parsed()) return cmd_generate_scn(g, gen);
    if (path->parsed()) return cmd_generate_path(g, gen);
    if (random->parsed()) return cmd_generate_random(g, gen);
    if (mixed->parsed()) return cmd_generate_mixed(g, gen);
    if (sparsify->parsed()) return cmd_generate_sparsify(g, gen);
    if (solve->parsed()) return cmd_solve(g, solve_opts);
    if (lp_solve->parsed()) return cmd_lp_solve(g, lp_opts);
    if (cycle->parsed()) return cmd_cycle_round(g, cycle_opts);
    if (verify->parsed()) return cmd_verify(g, verify_opts);
    if (bench->parsed()) return cmd_bench(g, bench_opts);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "santa: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "santa: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}
