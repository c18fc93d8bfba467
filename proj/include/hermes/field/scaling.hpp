#pragma once

#include <cmath>
#include <cstdint>

#include "hermes/field/fp.hpp"

namespace hermes::field {

/// Fixed-point scale rho >= 1 mapping reals onto field integers.
class ScalingFactor {
 public:
  explicit ScalingFactor(std::uint64_t rho) : rho_(rho) {
    if (rho == 0) throw UsageError("scaling factor must be >= 1");
  }
  std::uint64_t value() const { return rho_; }
  bool operator==(const ScalingFactor&) const = default;

 private:
  std::uint64_t rho_;
};

/// floor(x * rho) as a signed integer; rejects non-finite input and values outside int64.
inline std::int64_t scaled_integer(double x, ScalingFactor rho) {
  if (!std::isfinite(x)) throw UsageError("cannot scale a non-finite value");
  long double v = std::floor(static_cast<long double>(x) * static_cast<long double>(rho.value()));
  if (v >= 0x1.0p63L || v < -0x1.0p63L) throw UsageError("scaled value exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

/// floor(x * rho) mod p. Negative reals land in the upper half of the field.
/// Callers keep |floor(x * rho)| < p / 2 so that unscale can undo the map.
template <typename F>
F scale(double x, ScalingFactor rho) {
  return F::from_i64(scaled_integer(x, rho));
}

/// Signed integer represented by z: z if z <= (p-1)/2, else z - p.
template <typename F>
long double signed_value(const F& z) {
  auto to_ld = [](const typename F::Int& v) {
    long double out = 0;
    for (std::size_t i = F::kLimbs; i-- > 0;) out = out * 0x1.0p64L + static_cast<long double>(v.limbs[i]);
    return out;
  };
  if (z.is_lower_half()) return to_ld(z.to_int());
  return -to_ld((-z).to_int());
}

/// Inverse of scale: z / rho, reading the upper half of the field as negative.
/// Rounded up to the next double, so for a double x, x - 1/rho < unscale(scale(x)) <= x.
template <typename F>
double unscale(const F& z, ScalingFactor rho) {
  const long double k = signed_value(z);
  const long double r = static_cast<long double>(rho.value());
  double d = static_cast<double>(k / r);
  // fmal rounds once, so its sign is the sign of d * rho - k.
  while (std::fmal(d, r, -k) < 0) d = std::nextafter(d, HUGE_VAL);
  for (double below = std::nextafter(d, -HUGE_VAL); std::fmal(below, r, -k) >= 0;
       below = std::nextafter(d, -HUGE_VAL))
    d = below;
  return d;
}

}  // namespace hermes::field
