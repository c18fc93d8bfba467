#pragma once

#include <utility>
#include <vector>

#include "hermes/field/profiles.hpp"

namespace hermes::qap {

/// Dense univariate polynomial over Fr, lowest degree first, trailing zeros trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Fr> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const Fr& v) { return Polynomial({v}); }
  /// x - r.
  static Polynomial linear_root(const Fr& r) { return Polynomial({-r, Fr::one()}); }

  /// -1 stands for the zero polynomial's degree of minus infinity.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Fr>& coeffs() const { return c_; }
  Fr coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Fr::zero(); }

  Fr eval(const Fr& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Fr& s);
  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  /// Exact long division: (quotient, remainder) with deg(remainder) < deg(divisor).
  static std::pair<Polynomial, Polynomial> div_rem(const Polynomial& num, const Polynomial& den);

  /// Division by (x - r), discarding the remainder f(r).
  Polynomial divide_by_linear(const Fr& r) const;

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<Fr> c_;
};

}  // namespace hermes::qap
