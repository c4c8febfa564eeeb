#include "santa/lp/lp_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace santa::lp {
namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("lp line " + std::to_string(line) + ": " + what);
}

}  // namespace

LpFile read_lp(std::istream& in) {
  LpFile out;
  bool have_header = false;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream ss(text);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "mpc") {
      std::size_t np = 0, nc = 0, m = 0;
      if (have_header) fail(line, "duplicate header");
      if (!(ss >> np >> nc >> m)) fail(line, "expected 'mpc <n_p> <n_c> <m>'");
      out.rows.num_vars = m;
      out.rows.packing.assign(np, {});
      out.rows.covering.assign(nc, {});
      out.p.assign(np, 1.0);
      out.c.assign(nc, 1.0);
      have_header = true;
    } else if (!have_header) {
      fail(line, "missing 'mpc' header");
    } else if (tag == "P" || tag == "C") {
      std::size_t j = 0, i = 0;
      double v = 0;
      if (!(ss >> j >> i >> v)) fail(line, "expected '" + tag + " <row> <var> <value>'");
      auto& rows = tag == "P" ? out.rows.packing : out.rows.covering;
      if (j >= rows.size()) fail(line, "row index out of range");
      if (i >= out.rows.num_vars) fail(line, "variable index out of range");
      if (!std::isfinite(v) || v < 0) fail(line, "coefficient must be finite and nonnegative");
      rows[j].push_back({i, v});
    } else if (tag == "p" || tag == "c") {
      std::size_t j = 0;
      double v = 0;
      if (!(ss >> j >> v)) fail(line, "expected '" + tag + " <row> <value>'");
      auto& bounds = tag == "p" ? out.p : out.c;
      if (j >= bounds.size()) fail(line, "row index out of range");
      bounds[j] = v;
    } else {
      fail(line, "unknown record '" + tag + "'");
    }
    std::string extra;
    if (ss >> extra) fail(line, "trailing text");
  }
  if (!have_header) throw std::runtime_error("lp: empty input");
  return out;
}

LpFile read_lp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_lp(in);
}

void write_lp(std::ostream& out, const LpFile& lp) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "mpc " << lp.rows.n_p() << ' ' << lp.rows.n_c() << ' ' << lp.rows.num_vars << '\n';
  for (std::size_t j = 0; j < lp.rows.n_p(); ++j) {
    for (const Term& t : lp.rows.packing[j]) out << "P " << j << ' ' << t.var << ' ' << t.coef << '\n';
  }
  for (std::size_t j = 0; j < lp.rows.n_c(); ++j) {
    for (const Term& t : lp.rows.covering[j]) out << "C " << j << ' ' << t.var << ' ' << t.coef << '\n';
  }
  for (std::size_t j = 0; j < lp.p.size(); ++j) out << "p " << j << ' ' << lp.p[j] << '\n';
  for (std::size_t j = 0; j < lp.c.size(); ++j) out << "c " << j << ' ' << lp.c[j] << '\n';
  out.precision(old);
}

}  // namespace santa::lp
