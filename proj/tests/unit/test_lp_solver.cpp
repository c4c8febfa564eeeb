#include <cmath>
#include <sstream>

#include "doctest.h"
#include "lp_fixtures.hpp"
#include "santa/lp/lp_io.hpp"
#include "santa/lp/quantize.hpp"
#include "santa/lp/solver.hpp"

using namespace santa::lp;
using santa::congest::ExecutionMode;

namespace {

MixedLP single(double p, double c) {
  MixedLP lp;
  lp.num_vars = 1;
  lp.packing = {{{0, p}}};
  lp.covering = {{{0, c}}};
  return lp;
}

}  // namespace

TEST_CASE("normalize divides rows by their bounds") {
  MixedLP lp = single(2, 3);
  const std::vector<double> p{4}, c{6};
  MixedLP n = normalize(lp, p, c);
  CHECK(n.packing[0][0].coef == 0.5);
  CHECK(n.covering[0][0].coef == 0.5);
  const std::vector<double> zero{0};
  CHECK_THROWS_AS(normalize(lp, zero, c), std::invalid_argument);
}

TEST_CASE("canonicalize rejects unused variables and negative entries") {
  MixedLP lp = single(1, 1);
  lp.num_vars = 2;
  CHECK_THROWS_AS(lp.canonicalize(), std::invalid_argument);
  MixedLP neg = single(-1, 1);
  CHECK_THROWS_AS(neg.canonicalize(), std::invalid_argument);
}

TEST_CASE("identical single rows are feasible with equal row values") {
  SolverOptions opt;
  opt.eps = 0.1;
  FeasibilityResult r = solve_feasibility(single(1, 1), opt);
  REQUIRE(r.verdict == Verdict::kFeasible);
  CHECK(r.max_packing == doctest::Approx(static_cast<double>(r.min_covering)));
  CHECK(satisfies_feasibility(single(1, 1), r.x, 0.1));
}

TEST_CASE("matching paths: one edge feasible, two edges infeasible") {
  for (double eps : {0.5, 0.1}) {
    SolverOptions opt;
    opt.eps = eps;
    FeasibilityResult one = solve_feasibility(fixtures::matching_path(1), opt);
    REQUIRE(one.verdict == Verdict::kFeasible);
    CHECK(one.x[0] == doctest::Approx(1.0).epsilon(eps));
    FeasibilityResult two = solve_feasibility(fixtures::matching_path(2), opt);
    CHECK(two.verdict == Verdict::kInfeasible);
    CHECK(two.reason == InfeasibleReason::kNoImprovableVariable);
    CHECK(two.iterations <= two.iteration_cap);
  }
}

TEST_CASE("longer matching paths honor the verdict contract") {
  // Odd paths have ratio optimum exactly 1 and even paths of 2k edges have
  // 1 + 1/k, so both verdicts are admissible for most lengths; each verdict
  // must still carry its guarantee.
  SolverOptions opt;
  opt.eps = 0.5;
  for (std::size_t len = 1; len <= 7; ++len) {
    FeasibilityResult r = solve_feasibility(fixtures::matching_path(len), opt);
    CAPTURE(len);
    if (r.verdict == Verdict::kFeasible) {
      CHECK(satisfies_feasibility(fixtures::matching_path(len), r.x, 0.5));
    } else {
      CHECK(r.reason == InfeasibleReason::kNoImprovableVariable);
    }
  }
}

TEST_CASE("empty covering row is infeasible immediately") {
  MixedLP lp = single(1, 1);
  lp.covering.push_back({});
  SolverOptions opt;
  FeasibilityResult r = solve_feasibility(lp, opt);
  CHECK(r.verdict == Verdict::kInfeasible);
  CHECK(r.reason == InfeasibleReason::kEmptyCoveringRow);
  CHECK(r.empty_row == 1);
}

TEST_CASE("eps outside its range is rejected") {
  SolverOptions opt;
  opt.eps = 0.75;
  CHECK_THROWS_AS(solve_feasibility(single(1, 1), opt), std::invalid_argument);
  opt.eps = 1e-9;
  CHECK_THROWS_AS(solve_feasibility(single(1, 1), opt), std::invalid_argument);
}

TEST_CASE("faithful and fast-path runs agree exactly") {
  for (bool strict : {false, true}) {
    for (std::size_t len : {1, 2, 3, 4}) {
      SolverOptions a;
      a.eps = 0.5;
      a.strict_bits = strict;
      a.mode = ExecutionMode::kFaithful;
      SolverOptions b = a;
      b.mode = ExecutionMode::kFastPath;
      FeasibilityResult ra = solve_feasibility(fixtures::matching_path(len), a);
      FeasibilityResult rb = solve_feasibility(fixtures::matching_path(len), b);
      CAPTURE(len);
      CAPTURE(strict);
      CHECK(ra.verdict == rb.verdict);
      CHECK(ra.iterations == rb.iterations);
      CHECK(ra.x == rb.x);
      CHECK(ra.stats.rounds_elapsed == rb.stats.rounds_elapsed);
      CHECK(ra.stats.total_messages == rb.stats.total_messages);
      CHECK(ra.stats.max_bits_on_any_edge_per_round == rb.stats.max_bits_on_any_edge_per_round);
      CHECK(ra.stats.budget_violations == rb.stats.budget_violations);
    }
  }
}

TEST_CASE("strict mode stays within the bit budget") {
  SolverOptions opt;
  opt.eps = 0.5;
  opt.strict_bits = true;
  FeasibilityResult r = solve_feasibility(fixtures::matching_path(1), opt);
  CHECK(r.verdict == Verdict::kFeasible);
  CHECK(r.budget_violations == 0);
  CHECK(r.value_bits < 80);
}

TEST_CASE("max form: trivial and empty-support programs") {
  SolverOptions opt;
  opt.eps = 0.1;
  const std::vector<double> ones{1};
  MaxResult r = solve_max(single(1, 1), ones, ones, opt);
  CHECK(r.gamma == doctest::Approx(1.0).epsilon(0.1));
  CHECK(r.gamma <= 1.0 + 1e-12);
  REQUIRE(r.x.size() == 1);
  CHECK(r.x[0] <= 1.0 + 1e-12);
  CHECK(r.x[0] >= r.gamma - 1e-12);

  MixedLP empty = single(1, 1);
  empty.covering.push_back({});
  const std::vector<double> two{1, 1};
  MaxResult z = solve_max(empty, ones, two, opt);
  CHECK(z.zero_row);
  CHECK(z.witness_row == 1);
  CHECK(z.gamma == 0);
}

TEST_CASE("max form on a scaled program") {
  // max gamma : 2x <= 4, 3x >= gamma * 6 -> x = 2, gamma = 1.
  SolverOptions opt;
  opt.eps = 0.1;
  const std::vector<double> p{4}, c{6};
  MaxResult r = solve_max(single(2, 3), p, c, opt);
  CHECK(r.gamma >= 1.0 / 1.1 - 1e-12);
  CHECK(r.gamma <= 1.0 + 1e-12);
  CHECK(2 * r.x[0] <= 4 + 1e-9);
  CHECK(3 * r.x[0] >= r.gamma * 6 - 1e-9);
}

TEST_CASE("quantize returns the power at or below the value") {
  CHECK(quantize(1.0L, 0.01) == 1.0L);
  const long double p5 = std::pow(1.0L + static_cast<long double>(0.01), 5);
  CHECK(static_cast<double>(quantize(p5, 0.01)) == doctest::Approx(static_cast<double>(p5)).epsilon(1e-15));
  CHECK_THROWS_AS(quantize(0.0L, 0.1), std::invalid_argument);
  santa::Rng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const long double v = std::exp(20 * rng.unit() - 10);
    const double delta = 1e-6 + rng.unit() * 0.5;
    const long double q = quantize(v, delta);
    CHECK(q <= v * (1 + 1e-15L));
    CHECK(q > v / (1 + delta) * (1 - 1e-15L));
  }
}

TEST_CASE("lp text round trip") {
  std::istringstream in("mpc 1 2 2\n# comment\nP 0 0 1.5\nC 0 0 1\nC 1 1 2\np 0 3\n");
  LpFile f = read_lp(in);
  CHECK(f.rows.num_vars == 2);
  CHECK(f.p == std::vector<double>{3});
  CHECK(f.c == std::vector<double>{1, 1});
  std::ostringstream out;
  write_lp(out, f);
  std::istringstream again(out.str());
  LpFile g = read_lp(again);
  CHECK(g.rows.covering[1][0].coef == 2);
  std::istringstream bad("mpc 1 1 1\nP 0 3 1\n");
  CHECK_THROWS(read_lp(bad));
}
