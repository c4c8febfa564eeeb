#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace santa::lp {

struct Term {
  std::size_t var = 0;
  double coef = 0;
};

// Sparse row; terms sorted by variable with strictly positive coefficients.
using Row = std::vector<Term>;

// Packing rows P x <= 1 and covering rows C x >= 1 over nonnegative x, or
// the raw rows of an unnormalized program when paired with bounds.
struct MixedLP {
  std::size_t num_vars = 0;
  std::vector<Row> packing;
  std::vector<Row> covering;

  std::size_t n_p() const { return packing.size(); }
  std::size_t n_c() const { return covering.size(); }
  std::size_t nonzeros() const;

  // Sorts terms, merges duplicates, drops zeros. Throws std::invalid_argument
  // on negative or non-finite coefficients, out-of-range variables, or a
  // variable absent from every row.
  void canonicalize();
};

// Divides packing row j by p[j] and covering row j by c[j].
// Throws std::invalid_argument on a non-positive bound.
MixedLP normalize(MixedLP lp, std::span<const double> p, std::span<const double> c);

struct RowExtremes {
  long double max_packing = 0;  // 0 when there are no packing rows
  long double min_covering = 0;
};

// Recomputes max_j (P x)_j and min_j (C x)_j in extended precision.
RowExtremes evaluate(const MixedLP& lp, std::span<const double> x);

// 0 < max(Px) <= (1 + eps) min(Cx).
bool satisfies_feasibility(const MixedLP& lp, std::span<const double> x, double eps);

}  // namespace santa::lp
