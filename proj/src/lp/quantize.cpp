#include "santa/lp/quantize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "santa/congest/network.hpp"

namespace santa::lp {

Quantizer::Quantizer(double delta) : delta_(delta) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("quantization delta must lie in (0, 1)");
  log_base_ = std::log1p(static_cast<long double>(delta));
}

std::int64_t Quantizer::exponent(long double v) const {
  if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("quantize: value must be positive and finite");
  auto k = static_cast<std::int64_t>(std::floor(std::log(v) / log_base_));
  // A few ulps of slack so that exact powers map to themselves.
  const long double tol = v * (1 + 64 * std::numeric_limits<long double>::epsilon());
  while (value(k) > tol) --k;
  while (value(k + 1) <= tol) ++k;
  return k;
}

long double Quantizer::value(std::int64_t k) const {
  return std::exp(static_cast<long double>(k) * log_base_);
}

std::uint32_t Quantizer::width_for(long double log_range) const {
  const auto kmax = static_cast<std::uint64_t>(std::ceil(std::fabs(log_range) / log_base_)) + 2;
  return 1 + congest::ceil_log2(kmax + 1);
}

long double quantize(long double v, double delta) { return Quantizer(delta)(v); }

}  // namespace santa::lp
