#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hermes/util/error.hpp"

namespace hermes::pairing {

/// Bucketed (Pippenger) multi-scalar multiplication sum_i scalars[i] * bases[i].
/// Output is identical to the naive fold; only the evaluation order differs.
template <typename Point, typename Scalar>
Point multi_scalar_mul(std::span<const Scalar> scalars, std::span<const typename Point::Affine> bases) {
  if (scalars.size() != bases.size()) {
    throw UsageError("multi_scalar_mul: " + std::to_string(scalars.size()) + " scalars vs " +
                     std::to_string(bases.size()) + " points");
  }
  const std::size_t n = scalars.size();
  if (n == 0) return Point::identity();

  using Int = typename Scalar::Int;
  std::vector<Int> ints(n);
  std::size_t max_bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ints[i] = scalars[i].to_int();
    max_bits = std::max(max_bits, ints[i].num_bits());
  }
  if (max_bits == 0) return Point::identity();

  if (n < 8) {
    Point acc;
    for (std::size_t i = 0; i < n; ++i) acc += Point(bases[i]).mul(ints[i]);
    return acc;
  }

  const std::size_t c = std::clamp<std::size_t>(static_cast<std::size_t>(std::log2(static_cast<double>(n))) - 2, 2, 16);
  const std::size_t windows = (max_bits + c - 1) / c;
  std::vector<Point> buckets((std::size_t{1} << c) - 1);

  Point acc;
  for (std::size_t w = windows; w-- > 0;) {
    for (std::size_t k = 0; k < c; ++k) acc = acc.dbl();
    std::fill(buckets.begin(), buckets.end(), Point::identity());
    const std::size_t shift = w * c;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t digit = 0;
      for (std::size_t b = 0; b < c; ++b) {
        if (ints[i].bit(shift + b)) digit |= std::size_t{1} << b;
      }
      if (digit != 0) buckets[digit - 1].add_affine(bases[i]);
    }
    Point running;
    Point total;
    for (std::size_t b = buckets.size(); b-- > 0;) {
      running += buckets[b];
      total += running;
    }
    acc += total;
  }
  return acc;
}

/// Precomputed radix-2^8 table of a fixed base for fast repeated scalar multiplication.
template <typename Point, typename Scalar>
class FixedBaseTable {
 public:
  static constexpr std::size_t kWindow = 8;

  explicit FixedBaseTable(const Point& base) {
    const std::size_t windows = (Scalar::kBits + kWindow - 1) / kWindow;
    std::vector<Point> jac;
    jac.reserve(windows * 255);
    Point window_base = base;
    for (std::size_t w = 0; w < windows; ++w) {
      Point cur = window_base;
      for (std::size_t d = 1; d < 256; ++d) {
        jac.push_back(cur);
        cur += window_base;
      }
      window_base = cur;  // 256 * previous window base
    }
    table_ = Point::batch_to_affine(jac);
    windows_ = windows;
  }

  Point mul(const Scalar& s) const {
    auto k = s.to_int();
    Point acc;
    for (std::size_t w = 0; w < windows_; ++w) {
      std::size_t digit = 0;
      for (std::size_t b = 0; b < kWindow; ++b) {
        if (k.bit(w * kWindow + b)) digit |= std::size_t{1} << b;
      }
      if (digit != 0) acc.add_affine(table_[w * 255 + digit - 1]);
    }
    return acc;
  }

  /// Many multiples of the base, normalized to affine in one batch.
  std::vector<typename Point::Affine> batch_mul(std::span<const Scalar> scalars) const {
    std::vector<Point> jac;
    jac.reserve(scalars.size());
    for (const auto& s : scalars) jac.push_back(mul(s));
    return Point::batch_to_affine(jac);
  }

 private:
  std::vector<typename Point::Affine> table_;
  std::size_t windows_ = 0;
};

}  // namespace hermes::pairing
