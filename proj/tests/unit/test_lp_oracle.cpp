#include "doctest.h"
#include "lp_fixtures.hpp"
#include "santa/lp/solver.hpp"
#include "santa/oracles/lp_oracle.hpp"

using namespace santa;
using santa::lp::MixedLP;

namespace {

MixedLP unit_lp() {
  MixedLP lp;
  lp.num_vars = 1;
  lp.packing = {{{0, 1.0}}};
  lp.covering = {{{0, 1.0}}};
  return lp;
}

}  // namespace

TEST_CASE("simplex solves a small program exactly") {
  // min -x - y : x + 2y + s1 = 4, 3x + y + s2 = 6 -> x = 8/5, y = 6/5.
  std::vector<std::vector<Rational>> A{{1, 2, 1, 0}, {3, 1, 0, 1}};
  std::vector<Rational> b{4, 6}, c{-1, -1, 0, 0};
  auto r = oracles::simplex_standard(A, b, c);
  REQUIRE(r.status == oracles::SimplexStatus::kOptimal);
  CHECK(r.x[0] == Rational(8, 5));
  CHECK(r.x[1] == Rational(6, 5));
  CHECK(r.objective == Rational(-14, 5));
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
  std::vector<std::vector<Rational>> A{{1, 1}};
  std::vector<Rational> b{1};
  CHECK(oracles::simplex_standard(A, b, {-1, 0}).status == oracles::SimplexStatus::kOptimal);
  std::vector<std::vector<Rational>> B{{1, -1}};
  CHECK(oracles::simplex_standard(B, b, {-1, 0}).status == oracles::SimplexStatus::kUnbounded);
  std::vector<std::vector<Rational>> Z{{0, 0}};
  CHECK(oracles::simplex_standard(Z, b, {0, 0}).status == oracles::SimplexStatus::kInfeasible);
}

TEST_CASE("unit program: slack 0.9 infeasible, slack 1 feasible") {
  CHECK_FALSE(oracles::lp_feasibility_oracle(unit_lp(), Rational(9, 10)).feasible);
  auto r = oracles::lp_feasibility_oracle(unit_lp(), Rational(1));
  REQUIRE(r.feasible);
  CHECK(r.x[0] == 1);
  CHECK(*oracles::min_packing_ratio(unit_lp()) == 1);
}

TEST_CASE("feasibility oracle agrees with the exact ratio optimum") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    MixedLP lp = fixtures::random_lp(seed);
    const Rational lambda = *oracles::min_packing_ratio(lp);
    CAPTURE(seed);
    CHECK(oracles::lp_feasibility_oracle(lp, lambda).feasible);
    if (lambda > 0) CHECK_FALSE(oracles::lp_feasibility_oracle(lp, lambda * Rational(999, 1000)).feasible);
  }
}

TEST_CASE("solver verdicts are consistent with the exact optimum") {
  for (double eps : {0.5, 0.1}) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      MixedLP lp = fixtures::random_lp(seed);
      lp::SolverOptions opt;
      opt.eps = eps;
      const auto r = lp::solve_feasibility(lp, opt);
      const double lambda = oracles::min_packing_ratio(lp)->get_d();
      CAPTURE(seed);
      CAPTURE(eps);
      CHECK(r.iterations <= r.iteration_cap);
      if (r.verdict == lp::Verdict::kFeasible) {
        CHECK(lp::satisfies_feasibility(lp, r.x, eps));
        CHECK(lambda <= 1 + eps + 1e-12);
      } else {
        CHECK(r.reason == lp::InfeasibleReason::kNoImprovableVariable);
        CHECK(lambda >= (1 - eps / 50) * (1 - 1e-9));
      }
    }
  }
}

TEST_CASE("max form lands in the approximation band") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    MixedLP lp = fixtures::random_lp(seed);
    const Rational lambda_star = *oracles::min_packing_ratio(lp);
    lp::SolverOptions opt;
    opt.eps = 0.1;
    const std::vector<double> p(lp.n_p(), 1.0), c(lp.n_c(), 1.0);
    const auto r = lp::solve_max(lp, p, c, opt);
    CAPTURE(seed);
    CHECK(r.unbounded == (lambda_star == 0));
    if (r.unbounded) continue;
    const double gamma_star = 1 / lambda_star.get_d();
    CHECK(r.gamma <= gamma_star * (1 + 1e-9));
    CHECK(r.gamma >= gamma_star / 1.1 * (1 - 1e-9));
    const auto e = lp::evaluate(lp, r.x);
    CHECK(static_cast<double>(e.max_packing) <= 1 + 1e-9);
    CHECK(static_cast<double>(e.min_covering) >= r.gamma * (1 - 1e-9));
  }
}
