#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "santa/lp/mixed_lp.hpp"

namespace santa::lp {

// Rows with their bounds as read from text; bounds default to 1.
struct LpFile {
  MixedLP rows;
  std::vector<double> p;
  std::vector<double> c;
};

// Format:
//   mpc <n_p> <n_c> <m>
//   P <j> <i> <val>      C <j> <i> <val>
//   p <j> <val>          c <j> <val>
// Blank lines and lines starting with '#' are ignored. Throws
// std::runtime_error with the offending line number on malformed input.
LpFile read_lp(std::istream& in);
LpFile read_lp_file(const std::string& path);

void write_lp(std::ostream& out, const LpFile& lp);

}  // namespace santa::lp
