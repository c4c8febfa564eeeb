#include "santa/oracles/lp_oracle.hpp"

#include <stdexcept>

namespace santa::oracles {
namespace {

using Matrix = std::vector<std::vector<Rational>>;

struct Tableau {
  Matrix rows;               // constraint rows, last column is the right-hand side
  std::vector<Rational> obj; // reduced costs, last entry is -objective
  std::vector<std::size_t> basis;
};

void pivot(Tableau& t, std::size_t r, std::size_t col) {
  const std::size_t width = t.rows[r].size();
  const Rational inv = 1 / t.rows[r][col];
  for (std::size_t k = 0; k < width; ++k) t.rows[r][k] *= inv;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i == r || t.rows[i][col] == 0) continue;
    const Rational f = t.rows[i][col];
    for (std::size_t k = 0; k < width; ++k) t.rows[i][k] -= f * t.rows[r][k];
  }
  if (t.obj[col] != 0) {
    const Rational f = t.obj[col];
    for (std::size_t k = 0; k < width; ++k) t.obj[k] -= f * t.rows[r][k];
  }
  t.basis[r] = col;
}

// Minimizes over columns [0, allowed); returns false when unbounded.
bool run(Tableau& t, std::size_t allowed) {
  while (true) {
    std::size_t enter = allowed;
    for (std::size_t k = 0; k < allowed; ++k) {
      if (t.obj[k] < 0) {
        enter = k;
        break;
      }
    }
    if (enter == allowed) return true;
    std::size_t leave = t.rows.size();
    Rational best;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const Rational& a = t.rows[i][enter];
      if (a <= 0) continue;
      const Rational ratio = t.rows[i].back() / a;
      if (leave == t.rows.size() || ratio < best || (ratio == best && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == t.rows.size()) return false;
    pivot(t, leave, enter);
  }
}

Rational exact(double v) { return rational_from_double(v); }

void check_size(const lp::MixedLP& lp) {
  if (lp.n_p() > kLpOracleMaxDim || lp.n_c() > kLpOracleMaxDim || lp.num_vars > kLpOracleMaxDim) {
    throw std::invalid_argument("lp oracle: program exceeds the dense size cap");
  }
}

}  // namespace

SimplexResult simplex_standard(const Matrix& A, const std::vector<Rational>& b,
                               const std::vector<Rational>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  Tableau t;
  t.rows.assign(m, std::vector<Rational>(n + m + 1));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("simplex: ragged matrix");
    if (b[i] < 0) throw std::invalid_argument("simplex: negative right-hand side");
    for (std::size_t k = 0; k < n; ++k) t.rows[i][k] = A[i][k];
    t.rows[i][n + i] = 1;
    t.rows[i][n + m] = b[i];
    t.basis[i] = n + i;
  }
  // Phase one: minimize the sum of artificials.
  t.obj.assign(n + m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) t.obj[k] -= t.rows[i][k];
    t.obj[n + m] -= t.rows[i][n + m];
  }
  run(t, n + m);
  SimplexResult out;
  if (t.obj[n + m] != 0) return out;
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (t.rows[i][k] != 0) {
        pivot(t, i, k);
        break;
      }
    }
  }
  // Phase two over the original columns; artificial columns are frozen.
  t.obj.assign(n + m + 1, 0);
  for (std::size_t k = 0; k < n; ++k) t.obj[k] = c[k];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t col = t.basis[i];
    if (col >= n || t.obj[col] == 0) continue;
    const Rational f = t.obj[col];
    for (std::size_t k = 0; k <= n + m; ++k) t.obj[k] -= f * t.rows[i][k];
  }
  if (!run(t, n)) {
    out.status = SimplexStatus::kUnbounded;
    return out;
  }
  out.status = SimplexStatus::kOptimal;
  out.x.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n) out.x[t.basis[i]] = t.rows[i][n + m];
  }
  out.objective = -t.obj[n + m];
  return out;
}

LpOracleResult lp_feasibility_oracle(const lp::MixedLP& lp, const Rational& slack) {
  check_size(lp);
  if (slack < 0) throw std::invalid_argument("lp oracle: negative slack");
  const std::size_t m = lp.num_vars, np = lp.n_p(), nc = lp.n_c();
  // Columns: x (m), packing slacks (np), covering surpluses (nc).
  const std::size_t cols = m + np + nc;
  Matrix A(np + nc, std::vector<Rational>(cols));
  std::vector<Rational> b(np + nc);
  for (std::size_t j = 0; j < np; ++j) {
    for (const lp::Term& t : lp.packing[j]) A[j][t.var] += exact(t.coef);
    A[j][m + j] = 1;
    b[j] = slack;
  }
  for (std::size_t j = 0; j < nc; ++j) {
    for (const lp::Term& t : lp.covering[j]) A[np + j][t.var] += exact(t.coef);
    A[np + j][m + np + j] = -1;
    b[np + j] = 1;
  }
  SimplexResult r = simplex_standard(A, b, std::vector<Rational>(cols, 0));
  LpOracleResult out;
  out.feasible = r.status == SimplexStatus::kOptimal;
  if (out.feasible) out.x.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(m));
  return out;
}

std::optional<Rational> min_packing_ratio(const lp::MixedLP& lp) {
  check_size(lp);
  for (const lp::Row& r : lp.covering) {
    if (r.empty()) return std::nullopt;
  }
  const std::size_t m = lp.num_vars, np = lp.n_p(), nc = lp.n_c();
  // Columns: x (m), t, packing slacks (np), covering surpluses (nc).
  const std::size_t cols = m + 1 + np + nc;
  Matrix A(np + nc, std::vector<Rational>(cols));
  std::vector<Rational> b(np + nc), c(cols);
  c[m] = 1;
  for (std::size_t j = 0; j < np; ++j) {
    for (const lp::Term& t : lp.packing[j]) A[j][t.var] += exact(t.coef);
    A[j][m] = -1;
    A[j][m + 1 + j] = 1;
  }
  for (std::size_t j = 0; j < nc; ++j) {
    for (const lp::Term& t : lp.covering[j]) A[np + j][t.var] += exact(t.coef);
    A[np + j][m + 1 + np + j] = -1;
    b[np + j] = 1;
  }
  SimplexResult r = simplex_standard(A, b, c);
  if (r.status != SimplexStatus::kOptimal) throw std::logic_error("min_packing_ratio: unexpected status");
  return r.objective;
}

}  // namespace santa::oracles
