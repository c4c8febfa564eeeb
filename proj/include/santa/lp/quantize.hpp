#pragma once

#include <cstdint>

namespace santa::lp {

// Powers of (1 + delta): a positive v is represented by the exponent
// k = floor(log_{1+delta} v), i.e. by the value (1 + delta)^k <= v.
class Quantizer {
 public:
  explicit Quantizer(double delta);

  double delta() const { return delta_; }
  std::int64_t exponent(long double v) const;
  long double value(std::int64_t k) const;
  long double operator()(long double v) const { return value(exponent(v)); }

  // Wire width of an exponent whose magnitude is at most |ln v| <= log_range.
  std::uint32_t width_for(long double log_range) const;

 private:
  double delta_;
  long double log_base_;
};

// (1 + delta)^floor(log_{1+delta} v). Throws std::invalid_argument when
// v <= 0 or delta is outside (0, 1).
long double quantize(long double v, double delta);

}  // namespace santa::lp
