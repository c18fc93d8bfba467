#pragma once

#include "hermes/field/fp.hpp"

namespace hermes::pairing {

/// Quadratic extension F_p[i] / (i^2 + 1); requires p = 3 (mod 4).
template <typename Base>
class Fp2 {
 public:
  using BaseField = Base;

  constexpr Fp2() = default;
  constexpr Fp2(const Base& c0, const Base& c1) : c0_(c0), c1_(c1) {}
  constexpr explicit Fp2(const Base& c0) : c0_(c0) {}

  static constexpr Fp2 zero() { return Fp2(); }
  static constexpr Fp2 one() { return Fp2(Base::one()); }

  const Base& real() const { return c0_; }
  const Base& imag() const { return c1_; }

  constexpr bool is_zero() const { return c0_.is_zero() && c1_.is_zero(); }
  constexpr bool operator==(const Fp2& o) const { return c0_ == o.c0_ && c1_ == o.c1_; }

  constexpr Fp2& operator+=(const Fp2& o) {
    c0_ += o.c0_;
    c1_ += o.c1_;
    return *this;
  }
  constexpr Fp2& operator-=(const Fp2& o) {
    c0_ -= o.c0_;
    c1_ -= o.c1_;
    return *this;
  }
  constexpr Fp2& operator*=(const Fp2& o) {
    // Karatsuba: (a + bi)(c + di) = (ac - bd) + ((a + b)(c + d) - ac - bd) i
    Base ac = c0_ * o.c0_;
    Base bd = c1_ * o.c1_;
    Base mid = (c0_ + c1_) * (o.c0_ + o.c1_);
    c0_ = ac - bd;
    c1_ = mid - ac - bd;
    return *this;
  }

  friend constexpr Fp2 operator+(Fp2 a, const Fp2& b) { return a += b; }
  friend constexpr Fp2 operator-(Fp2 a, const Fp2& b) { return a -= b; }
  friend constexpr Fp2 operator*(Fp2 a, const Fp2& b) { return a *= b; }
  constexpr Fp2 operator-() const { return Fp2(-c0_, -c1_); }

  constexpr Fp2 scale(const Base& k) const { return Fp2(c0_ * k, c1_ * k); }

  constexpr Fp2 square() const {
    // (a + bi)^2 = (a + b)(a - b) + 2ab i
    return Fp2((c0_ + c1_) * (c0_ - c1_), (c0_ * c1_).dbl());
  }
  constexpr Fp2 dbl() const { return *this + *this; }

  /// Frobenius x -> x^p, which is conjugation when p = 3 (mod 4).
  constexpr Fp2 conjugate() const { return Fp2(c0_, -c1_); }

  Fp2 inverse() const {
    Base norm = c0_.square() + c1_.square();
    if (norm.is_zero()) throw MathError("division by zero in F_p^2");
    Base inv = norm.inverse();
    return Fp2(c0_ * inv, -(c1_ * inv));
  }

  template <std::size_t N>
  Fp2 pow(const field::BigInt<N>& e) const {
    Fp2 result = one();
    for (std::size_t i = e.num_bits(); i-- > 0;) {
      result = result.square();
      if (e.bit(i)) result *= *this;
    }
    return result;
  }

  void write_bytes(Bytes& out) const {
    c0_.write_bytes(out);
    c1_.write_bytes(out);
  }

  static Fp2 read(ByteReader& r) {
    Base a = Base::from_bytes(r.take(Base::kByteWidth));
    Base b = Base::from_bytes(r.take(Base::kByteWidth));
    return Fp2(a, b);
  }

  static constexpr std::size_t kByteWidth = 2 * Base::kByteWidth;

 private:
  Base c0_{};
  Base c1_{};
};

}  // namespace hermes::pairing
