#pragma once

#include <span>
#include <vector>

#include "hermes/field/bigint.hpp"

namespace hermes::pairing {

/// Affine point on y^2 = x^3 + x; `infinity` marks the identity.
template <typename F>
struct AffinePoint {
  F x{};
  F y{};
  bool infinity = true;

  static AffinePoint identity() { return {}; }
  bool operator==(const AffinePoint& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
  }
  bool on_curve() const { return infinity || y.square() == x.square() * x + x; }
  AffinePoint negate() const { return infinity ? *this : AffinePoint{x, -y, false}; }
};

/// Jacobian point on y^2 = x^3 + x over F (F is F_p or F_p^2).
template <typename F>
class CurvePoint {
 public:
  using Affine = AffinePoint<F>;

  CurvePoint() : x_(F::one()), y_(F::one()), z_(F::zero()) {}
  CurvePoint(const Affine& a)  // NOLINT(google-explicit-constructor)
      : x_(a.x), y_(a.y), z_(a.infinity ? F::zero() : F::one()) {
    if (a.infinity) {
      x_ = F::one();
      y_ = F::one();
    }
  }

  static CurvePoint identity() { return CurvePoint(); }
  bool is_identity() const { return z_.is_zero(); }

  bool operator==(const CurvePoint& o) const {
    if (is_identity() || o.is_identity()) return is_identity() == o.is_identity();
    F z1z1 = z_.square();
    F z2z2 = o.z_.square();
    if (x_ * z2z2 != o.x_ * z1z1) return false;
    return y_ * z2z2 * o.z_ == o.y_ * z1z1 * z_;
  }

  CurvePoint operator-() const {
    CurvePoint r = *this;
    r.y_ = -r.y_;
    return r;
  }

  CurvePoint dbl() const {
    if (is_identity()) return *this;
    // dbl-2007-bl with a = 1.
    F xx = x_.square();
    F yy = y_.square();
    F yyyy = yy.square();
    F zz = z_.square();
    F s = ((x_ + yy).square() - xx - yyyy).dbl();
    F m = xx.dbl() + xx + zz.square();
    F t = m.square() - s.dbl();
    CurvePoint r;
    r.x_ = t;
    r.y_ = m * (s - t) - yyyy.dbl().dbl().dbl();
    r.z_ = (y_ + z_).square() - yy - zz;
    return r;
  }

  CurvePoint operator+(const CurvePoint& o) const {
    if (is_identity()) return o;
    if (o.is_identity()) return *this;
    F z1z1 = z_.square();
    F z2z2 = o.z_.square();
    F u1 = x_ * z2z2;
    F u2 = o.x_ * z1z1;
    F s1 = y_ * o.z_ * z2z2;
    F s2 = o.y_ * z_ * z1z1;
    F h = u2 - u1;
    F rr = s2 - s1;
    if (h.is_zero()) return rr.is_zero() ? dbl() : identity();
    F i = h.dbl().square();
    F j = h * i;
    F r2 = rr.dbl();
    F v = u1 * i;
    CurvePoint out;
    out.x_ = r2.square() - j - v.dbl();
    out.y_ = r2 * (v - out.x_) - (s1 * j).dbl();
    out.z_ = ((z_ + o.z_).square() - z1z1 - z2z2) * h;
    return out;
  }

  CurvePoint& operator+=(const CurvePoint& o) { return *this = *this + o; }
  CurvePoint operator-(const CurvePoint& o) const { return *this + (-o); }

  /// Mixed addition with an affine point.
  CurvePoint& add_affine(const Affine& a) {
    if (a.infinity) return *this;
    if (is_identity()) return *this = CurvePoint(a);
    F z1z1 = z_.square();
    F u2 = a.x * z1z1;
    F s2 = a.y * z_ * z1z1;
    F h = u2 - x_;
    F rr = (s2 - y_).dbl();
    if (h.is_zero()) return *this = rr.is_zero() ? dbl() : identity();
    F hh = h.square();
    F i = hh.dbl().dbl();
    F j = h * i;
    F v = x_ * i;
    F x3 = rr.square() - j - v.dbl();
    F y3 = rr * (v - x3) - (y_ * j).dbl();
    F z3 = (z_ + h).square() - z1z1 - hh;
    x_ = x3;
    y_ = y3;
    z_ = z3;
    return *this;
  }

  template <std::size_t N>
  CurvePoint mul(const field::BigInt<N>& k) const {
    CurvePoint acc;
    for (std::size_t i = k.num_bits(); i-- > 0;) {
      acc = acc.dbl();
      if (k.bit(i)) acc += *this;
    }
    return acc;
  }

  Affine to_affine() const {
    if (is_identity()) return Affine::identity();
    F zinv = z_.inverse();
    F zinv2 = zinv.square();
    return Affine{x_ * zinv2, y_ * zinv2 * zinv, false};
  }

  /// Normalizes many points with one field inversion.
  static std::vector<Affine> batch_to_affine(std::span<const CurvePoint> pts) {
    std::vector<Affine> out(pts.size());
    std::vector<F> prefix(pts.size());
    F acc = F::one();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      prefix[i] = acc;
      if (!pts[i].is_identity()) acc *= pts[i].z_;
    }
    F inv = acc.inverse();
    for (std::size_t i = pts.size(); i-- > 0;) {
      if (pts[i].is_identity()) continue;
      F zinv = inv * prefix[i];
      inv *= pts[i].z_;
      F zinv2 = zinv.square();
      out[i] = Affine{pts[i].x_ * zinv2, pts[i].y_ * zinv2 * zinv, false};
    }
    return out;
  }

 private:
  F x_, y_, z_;
};

}  // namespace hermes::pairing
