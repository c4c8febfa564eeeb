#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "santa/congest/network.hpp"
#include "santa/lp/mixed_lp.hpp"

namespace santa::lp {

struct SolverOptions {
  double eps = 0.1;
  double c_R = 1000;  // iteration cap constant
  // Quantize every transmitted value to a power of (1 + delta) with
  // delta = eps / (200 * c_quant * R).
  bool strict_bits = false;
  double c_quant = 4;
  congest::ExecutionMode mode = congest::ExecutionMode::kFastPath;
  congest::NetworkConfig network{};
  // Replaces the computed iteration cap when positive.
  std::int64_t max_iterations = 0;
  // When no variable can improve, return the current point if it already
  // satisfies max(Px) <= (1 + eps) min(Cx).
  bool certify_stalled_point = true;
  // Charge one aggregation for every node to learn n_p, n_c and m.
  bool charge_parameter_discovery = false;
};

enum class Verdict { kFeasible, kInfeasible };

enum class InfeasibleReason {
  kNone,
  kNoImprovableVariable,  // certifies {Cx >= 1, Px <= (1 - eps/50)} is empty
  kIterationCap,
  kEmptyCoveringRow,
};

struct FeasibilityResult {
  Verdict verdict = Verdict::kInfeasible;
  InfeasibleReason reason = InfeasibleReason::kNone;
  std::vector<double> x;
  std::int64_t iterations = 0;
  std::int64_t iteration_cap = 0;
  double K = 0;
  bool stalled_point_certified = false;
  std::size_t empty_row = 0;  // covering row index for kEmptyCoveringRow
  long double max_packing = 0;
  long double min_covering = 0;
  congest::RoundStats stats;
  std::int64_t budget_violations = 0;
  std::uint32_t value_bits = 0;  // wire width of one transmitted real
};

// Smallest accepted eps for an LP network with n nodes.
double min_epsilon(std::size_t n);

// Iteration cap c_R ln^2(n) ln(m/eps) / eps^3.
std::int64_t iteration_cap(std::size_t n, std::size_t m, double eps, double c_R);

// Multiplicative-weights (1+eps)-feasibility solver on a normalized LP. The
// communication network has one node per variable and per row, joined where
// the coefficient is nonzero; disconnected parts are linked in id order.
FeasibilityResult solve_feasibility(const MixedLP& lp, const SolverOptions& options);

struct MaxResult {
  std::vector<double> x;    // P x <= p, C x >= gamma c
  double gamma = 0;
  double lambda_lower = 0;  // certified lower bound on min-form lambda*
  double lambda_upper = 0;  // achieved lambda = 1 / gamma
  bool zero_row = false;    // some covering row has empty support
  std::size_t witness_row = 0;
  bool unbounded = false;   // every covering row reaches a packing-free variable
  int subproblems = 0;
  congest::RoundStats stats;
};

// max { gamma : P x <= p, C x >= gamma c, x >= 0 } to within a factor 1 + eps,
// by a sequence of feasibility subproblems on P / lambda'.
MaxResult solve_max(const MixedLP& rows, std::span<const double> p, std::span<const double> c,
                    const SolverOptions& options);

std::string to_string(Verdict v);
std::string to_string(InfeasibleReason r);

}  // namespace santa::lp
