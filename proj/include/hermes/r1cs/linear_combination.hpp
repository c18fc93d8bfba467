#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hermes/field/profiles.hpp"

namespace hermes::r1cs {

/// Handle to a wire. Before finalization the id is a builder id; the constraint system
/// maps it to the final publics-first index.
struct Var {
  std::uint32_t id = 0;
  bool operator==(const Var&) const = default;
};

inline constexpr Var kOne{0};

struct Term {
  std::uint32_t wire;
  Fr coeff;
};

/// Sparse sum of coeff * wire, kept sorted by wire with no duplicates or zero coefficients.
class LinearCombination {
 public:
  LinearCombination() = default;
  LinearCombination(Var v) { terms_.push_back({v.id, Fr::one()}); }  // NOLINT(implicit)
  LinearCombination(Var v, const Fr& coeff) {
    if (!coeff.is_zero()) terms_.push_back({v.id, coeff});
  }

  static LinearCombination constant(const Fr& c) { return LinearCombination(kOne, c); }
  static LinearCombination constant(std::uint64_t c) { return constant(Fr::from_u64(c)); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when only the constant-one wire appears.
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].wire == 0); }
  Fr constant_value() const { return !terms_.empty() && terms_[0].wire == 0 ? terms_[0].coeff : Fr::zero(); }
  std::uint32_t max_wire() const { return terms_.empty() ? 0 : terms_.back().wire; }

  void add_term(std::uint32_t wire, const Fr& coeff);

  LinearCombination& operator+=(const LinearCombination& o);
  LinearCombination& operator-=(const LinearCombination& o);
  LinearCombination& operator*=(const Fr& s);

  LinearCombination operator-() const {
    LinearCombination out = *this;
    return out *= -Fr::one();
  }

  /// Sum over terms of coeff * values[wire].
  Fr evaluate(std::span<const Fr> values) const {
    Fr acc;
    for (const auto& t : terms_) acc += t.coeff * values[t.wire];
    return acc;
  }

  /// Applies an index map to every wire and re-sorts.
  LinearCombination remapped(std::span<const std::uint32_t> map) const;

  bool operator==(const LinearCombination& o) const;

 private:
  LinearCombination merged(const LinearCombination& o, const Fr& scale) const;

  std::vector<Term> terms_;
};

// Namespace-scope so that Var operands convert implicitly.
inline LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
inline LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
inline LinearCombination operator*(LinearCombination a, const Fr& s) { return a *= s; }
inline LinearCombination operator*(const Fr& s, LinearCombination a) { return a *= s; }

using LC = LinearCombination;

}  // namespace hermes::r1cs
