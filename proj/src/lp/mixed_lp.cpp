#include "santa/lp/mixed_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace santa::lp {
namespace {

void canonicalize_row(Row& row, std::size_t num_vars) {
  for (const Term& t : row) {
    if (t.var >= num_vars) throw std::invalid_argument("variable index out of range");
    if (!std::isfinite(t.coef) || t.coef < 0) {
      throw std::invalid_argument("coefficients must be finite and nonnegative");
    }
  }
  std::stable_sort(row.begin(), row.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  Row merged;
  for (const Term& t : row) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0; });
  row = std::move(merged);
}

long double row_value(const Row& row, std::span<const double> x) {
  long double s = 0;
  for (const Term& t : row) s += static_cast<long double>(t.coef) * x[t.var];
  return s;
}

}  // namespace

std::size_t MixedLP::nonzeros() const {
  std::size_t nnz = 0;
  for (const auto& r : packing) nnz += r.size();
  for (const auto& r : covering) nnz += r.size();
  return nnz;
}

void MixedLP::canonicalize() {
  std::vector<bool> used(num_vars, false);
  for (auto* rows : {&packing, &covering}) {
    for (Row& r : *rows) {
      canonicalize_row(r, num_vars);
      for (const Term& t : r) used[t.var] = true;
    }
  }
  for (std::size_t i = 0; i < num_vars; ++i) {
    if (!used[i]) throw std::invalid_argument("variable " + std::to_string(i) + " appears in no row");
  }
}

MixedLP normalize(MixedLP lp, std::span<const double> p, std::span<const double> c) {
  if (p.size() != lp.n_p() || c.size() != lp.n_c()) throw std::invalid_argument("bound vector size mismatch");
  auto scale = [](std::vector<Row>& rows, std::span<const double> bound) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (!(bound[j] > 0) || !std::isfinite(bound[j])) {
        throw std::invalid_argument("row bounds must be positive and finite");
      }
      for (Term& t : rows[j]) t.coef /= bound[j];
    }
  };
  scale(lp.packing, p);
  scale(lp.covering, c);
  lp.canonicalize();
  return lp;
}

RowExtremes evaluate(const MixedLP& lp, std::span<const double> x) {
  if (x.size() != lp.num_vars) throw std::invalid_argument("solution size mismatch");
  RowExtremes out;
  for (const Row& r : lp.packing) out.max_packing = std::max(out.max_packing, row_value(r, x));
  out.min_covering = lp.covering.empty() ? 0 : std::numeric_limits<long double>::infinity();
  for (const Row& r : lp.covering) out.min_covering = std::min(out.min_covering, row_value(r, x));
  return out;
}

bool satisfies_feasibility(const MixedLP& lp, std::span<const double> x, double eps) {
  for (double v : x) {
    if (!(v >= 0) || !std::isfinite(v)) return false;
  }
  const RowExtremes e = evaluate(lp, x);
  return e.max_packing > 0 && e.max_packing <= (1.0L + eps) * e.min_covering;
}

}  // namespace santa::lp
