#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "santa/alloc/instance.hpp"
#include "santa/alloc/pipeline.hpp"
#include "santa/congest/round_stats.hpp"
#include "santa/lp/lp_io.hpp"
#include "santa/lp/solver.hpp"
#include "santa/oracles/brute_force.hpp"
#include "santa/oracles/generators.hpp"
#include "santa/oracles/verify.hpp"

namespace py = pybind11;
using namespace santa;

namespace {

// Instances and LPs cross the boundary in their text formats; exact
// rationals cross as strings.

alloc::Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return alloc::read_instance(in).instance;
}

std::string instance_text(const alloc::Instance& inst) {
  std::ostringstream out;
  alloc::write_instance(out, inst);
  return out.str();
}

congest::ExecutionMode parse_mode(const std::string& mode) {
  if (mode == "fast") return congest::ExecutionMode::kFastPath;
  if (mode == "faithful") return congest::ExecutionMode::kFaithful;
  throw std::invalid_argument("mode must be 'fast' or 'faithful'");
}

std::string stats_csv(const congest::StatsLog& log) {
  std::ostringstream out;
  congest::write_stats_csv(out, "run", log);
  return out.str();
}

std::vector<std::pair<std::size_t, std::size_t>> pairs(const alloc::Assignment& a) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& g : a) out.emplace_back(g.gift, g.child);
  return out;
}

py::dict solve(const std::string& text, std::uint64_t seed, double eps, const std::string& mode, bool strict_bits,
               double beta_const) {
  const alloc::Instance inst = parse_instance(text);
  alloc::PipelineConfig cfg;
  cfg.seed = seed;
  cfg.eps = eps;
  cfg.mode = parse_mode(mode);
  cfg.strict_bits = strict_bits;
  cfg.beta_const = beta_const;
  alloc::SolveResult r;
  {
    py::gil_scoped_release release;
    r = alloc::solve(inst, cfg);
  }
  const auto report = oracles::verify_assignment(inst, r.assignment);
  py::dict d;
  d["valid"] = report.valid && r.audit.valid;
  d["value"] = to_string(r.value);
  d["T"] = to_string(r.T);
  d["alpha"] = to_string(r.alpha);
  d["beta"] = r.beta;
  d["retries"] = r.retries;
  d["fallbacks"] = r.fallbacks;
  d["probes"] = r.probes.size();
  d["rounds"] = r.stats.total().rounds_elapsed;
  d["assignment"] = pairs(r.assignment);
  d["stats_csv"] = stats_csv(r.stats);
  return d;
}

py::dict verify(const std::string& text, const std::vector<std::pair<std::size_t, std::size_t>>& assignment) {
  const alloc::Instance inst = parse_instance(text);
  alloc::Assignment a;
  for (const auto& [gift, child] : assignment) a.push_back({static_cast<alloc::GiftId>(gift), static_cast<alloc::ChildId>(child)});
  const auto report = oracles::verify_assignment(inst, a);
  py::dict d;
  d["valid"] = report.valid;
  d["error"] = report.error;
  d["min_value"] = to_string(report.min_value);
  return d;
}

std::string brute_force_opt(const std::string& text) {
  const alloc::Instance inst = parse_instance(text);
  py::gil_scoped_release release;
  return to_string(oracles::brute_force_opt(inst).value);
}

py::dict lp_solve(const std::string& text, double eps, const std::string& mode, bool strict_bits,
                  double bandwidth_const) {
  std::istringstream in(text);
  const lp::LpFile file = lp::read_lp(in);
  lp::SolverOptions opt;
  opt.eps = eps;
  opt.mode = parse_mode(mode);
  opt.strict_bits = strict_bits;
  opt.network.bandwidth_constant = bandwidth_const;
  lp::FeasibilityResult r;
  {
    py::gil_scoped_release release;
    r = lp::solve_feasibility(lp::normalize(file.rows, file.p, file.c), opt);
  }
  py::dict d;
  d["verdict"] = lp::to_string(r.verdict);
  d["reason"] = lp::to_string(r.reason);
  d["iterations"] = r.iterations;
  d["iteration_cap"] = r.iteration_cap;
  d["x"] = r.x;
  d["rounds"] = r.stats.rounds_elapsed;
  d["violations"] = r.budget_violations + r.stats.budget_violations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Max-min gift allocation on a simulated CONGEST network";
  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<std::runtime_error>(m, "InputError", PyExc_ValueError);

  m.def("solve", &solve, py::arg("instance"), py::arg("seed") = 0, py::arg("eps") = 0.5, py::arg("mode") = "fast",
        py::arg("strict_bits") = false, py::arg("beta_const") = 1.0,
        "Allocate gifts; returns value, T, alpha, beta, assignment [(gift, child)] and the stats CSV.");
  m.def("verify", &verify, py::arg("instance"), py::arg("assignment"),
        "Check an assignment [(gift, child)] against an instance.");
  m.def("brute_force_opt", &brute_force_opt, py::arg("instance"), "Exact optimum of a small instance.");
  m.def("lp_solve", &lp_solve, py::arg("lp"), py::arg("eps") = 0.1, py::arg("mode") = "fast",
        py::arg("strict_bits") = false, py::arg("bandwidth_const") = 8.0,
        "Feasibility solve of an LP given in the mpc text format.");

  m.def(
      "generate_scn",
      [](std::size_t n, const std::string& a, const std::string& b) { return instance_text(oracles::gen_scn(n, a, b)); },
      py::arg("n"), py::arg("a"), py::arg("b"));
  m.def(
      "generate_path",
      [](const std::string& variant, std::size_t n) {
        return instance_text(oracles::gen_path(oracles::parse_path_variant(variant), n));
      },
      py::arg("variant"), py::arg("n"));
  m.def(
      "generate_random",
      [](std::size_t children, std::size_t gifts, std::int64_t lo, std::int64_t hi, double density,
         std::uint64_t seed) {
        return instance_text(oracles::gen_random({children, gifts, lo, hi, density, seed}));
      },
      py::arg("children"), py::arg("gifts"), py::arg("lo") = 1, py::arg("hi") = 10, py::arg("density") = 0.5,
      py::arg("seed") = 0);
  m.def(
      "generate_mixed",
      [](std::size_t children, std::size_t big, std::size_t small, std::size_t small_degree, std::int64_t big_value,
         std::uint64_t seed) {
        return instance_text(oracles::gen_mixed({children, big, small, small_degree, big_value, seed}));
      },
      py::arg("children") = 4, py::arg("big") = 2, py::arg("small") = 40, py::arg("small_degree") = 2,
      py::arg("big_value") = 100, py::arg("seed") = 0);
}
