#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace santa {

using Rational = mpq_class;

// Parses "7", "-2", "2.5", "7/3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double value);

std::string to_string(const Rational& value);

// Seeded generator with platform-independent bounded draws. The standard
// distributions are implementation-defined, which would break byte-level
// reproducibility of generated instances across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  // Uniform in [0, 1) with 53 random bits.
  double unit();
  // Exponential with the given rate.
  double exponential(double rate);

  // Derives an independent stream for a labelled sub-task.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t label);

 private:
  std::mt19937_64 engine_;
};

}  // namespace santa
