#include "hermes/qap/polynomial.hpp"

#include "hermes/qap/ntt.hpp"

namespace hermes::qap {

Fr Polynomial::eval(const Fr& x) const {
  Fr acc;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) { return Polynomial(convolve(a.c_, b.c_)); }

Polynomial operator*(Polynomial a, const Fr& s) {
  for (auto& c : a.c_) c *= s;
  a.trim();
  return a;
}

std::pair<Polynomial, Polynomial> Polynomial::div_rem(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw MathError("polynomial division by zero");
  if (num.degree() < den.degree()) return {Polynomial(), num};
  std::vector<Fr> rem = num.c_;
  const std::size_t dd = den.c_.size() - 1;
  std::vector<Fr> quot(rem.size() - dd);
  const Fr lead_inv = den.c_.back().inverse();
  for (std::size_t k = quot.size(); k-- > 0;) {
    Fr q = rem[k + dd] * lead_inv;
    quot[k] = q;
    if (q.is_zero()) continue;
    for (std::size_t j = 0; j <= dd; ++j) rem[k + j] -= q * den.c_[j];
  }
  rem.resize(dd);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::divide_by_linear(const Fr& r) const {
  if (c_.size() <= 1) return {};
  std::vector<Fr> q(c_.size() - 1);
  Fr carry;
  for (std::size_t i = c_.size(); i-- > 1;) {
    carry = c_[i] + carry * r;
    q[i - 1] = carry;
  }
  return Polynomial(std::move(q));
}

}  // namespace hermes::qap
