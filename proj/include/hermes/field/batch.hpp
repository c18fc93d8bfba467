#pragma once

#include <span>
#include <vector>

#include "hermes/util/error.hpp"

namespace hermes::field {

/// Montgomery's trick: inverts every entry with one field inversion.
template <typename F>
void batch_inverse(std::span<F> xs) {
  if (xs.empty()) return;
  std::vector<F> prefix(xs.size());
  F acc = F::one();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].is_zero()) throw MathError("division by zero in batch inversion");
    prefix[i] = acc;
    acc *= xs[i];
  }
  F inv = acc.inverse();
  for (std::size_t i = xs.size(); i-- > 0;) {
    F next = inv * xs[i];
    xs[i] = inv * prefix[i];
    inv = next;
  }
}

}  // namespace hermes::field
