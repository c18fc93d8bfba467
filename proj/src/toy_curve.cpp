#include "hermes/pairing/toy_curve.hpp"

namespace hermes::pairing {

namespace {

Fq2 lift(const Fq& a) { return Fq2(a); }

/// Evaluates the Miller function f_{q,P} at Q. Vertical lines take values in F_p because
/// x_Q is in F_p for distortion-map points, so the final exponentiation removes them.
Fq2 miller_loop(const G1Affine& p, const G2Affine& q) {
  if (p.infinity || q.infinity) return Fq2::one();
  const auto order = Fr::kModulus;
  Fq2 f = Fq2::one();
  Fq xt = p.x;
  Fq yt = p.y;
  bool t_inf = false;
  const Fq three = Fq::from_u64(3);
  for (std::size_t i = order.num_bits() - 1; i-- > 0;) {
    f = f.square();
    if (!t_inf) {
      Fq lambda = (three * xt.square() + Fq::one()) * yt.dbl().inverse();
      f *= q.y - lift(yt) - (q.x - lift(xt)).scale(lambda);
      Fq x3 = lambda.square() - xt.dbl();
      yt = lambda * (xt - x3) - yt;
      xt = x3;
    }
    if (!order.bit(i)) continue;
    if (t_inf) {
      xt = p.x;
      yt = p.y;
      t_inf = false;
      continue;
    }
    if (xt == p.x) {
      // T = -P: the chord is vertical and T + P is the identity.
      t_inf = true;
      continue;
    }
    Fq lambda = (p.y - yt) * (p.x - xt).inverse();
    f *= q.y - lift(yt) - (q.x - lift(xt)).scale(lambda);
    Fq x3 = lambda.square() - xt - p.x;
    yt = lambda * (xt - x3) - yt;
    xt = x3;
  }
  return f;
}

Gt final_exponentiation(const Fq2& f) {
  // (p^2 - 1) / q = (p - 1) * 4, and f^(p - 1) = conj(f) / f.
  Fq2 g = f.conjugate() * f.inverse();
  return Gt(g.square().square());
}

}  // namespace

Gt Gt::read(ByteReader& r) { return Gt(Fq2::read(r)); }

const G1Affine& g1_generator() {
  static const G1Affine g{Fq::from_u64(0x2c7de807baa05312ULL), Fq::from_u64(0x10970f80a86d3f9eULL), false};
  return g;
}

G2Affine distort(const G1Affine& p) {
  if (p.infinity) return G2Affine::identity();
  return G2Affine{Fq2(-p.x), Fq2(Fq::zero(), p.y), false};
}

const G2Affine& g2_generator() {
  static const G2Affine g = distort(g1_generator());
  return g;
}

bool in_subgroup(const G1Affine& p) {
  if (p.infinity) return true;
  if (!p.on_curve()) return false;
  return G1(p).mul(Fr::kModulus).is_identity();
}

bool in_subgroup(const G2Affine& p) {
  if (p.infinity) return true;
  if (!p.x.imag().is_zero() || !p.y.real().is_zero()) return false;
  if (!p.on_curve()) return false;
  return G2(p).mul(Fr::kModulus).is_identity();
}

G1 operator*(const Fr& s, const G1& p) { return p.mul(s.to_int()); }
G2 operator*(const Fr& s, const G2& p) { return p.mul(s.to_int()); }

Gt pair(const G1Affine& p, const G2Affine& q) { return final_exponentiation(miller_loop(p, q)); }

Gt multi_pair(std::span<const std::pair<G1Affine, G2Affine>> terms) {
  Fq2 f = Fq2::one();
  for (const auto& [p, q] : terms) f *= miller_loop(p, q);
  return final_exponentiation(f);
}

G1 msm_g1(std::span<const Fr> scalars, std::span<const G1Affine> bases) {
  return multi_scalar_mul<G1, Fr>(scalars, bases);
}

G2 msm_g2(std::span<const Fr> scalars, std::span<const G2Affine> bases) {
  return multi_scalar_mul<G2, Fr>(scalars, bases);
}

namespace {

template <typename F>
void write_point(Bytes& out, const AffinePoint<F>& p) {
  out.push_back(p.infinity ? 1 : 0);
  if (p.infinity) {
    F::zero().write_bytes(out);
    F::zero().write_bytes(out);
  } else {
    p.x.write_bytes(out);
    p.y.write_bytes(out);
  }
}

template <typename F>
F read_coord(ByteReader& r) {
  if constexpr (std::is_same_v<F, Fq>) {
    return Fq::from_bytes(r.take(Fq::kByteWidth));
  } else {
    return F::read(r);
  }
}

template <typename F>
AffinePoint<F> read_point(ByteReader& r) {
  std::uint8_t flag = r.u8();
  if (flag > 1) throw ParseError("invalid point flag byte");
  F x = read_coord<F>(r);
  F y = read_coord<F>(r);
  if (flag == 1) {
    if (!x.is_zero() || !y.is_zero()) throw ParseError("identity point with nonzero coordinates");
    return AffinePoint<F>::identity();
  }
  AffinePoint<F> p{x, y, false};
  if (!p.on_curve()) throw ParseError("point is not on the curve");
  if (!in_subgroup(p)) throw ParseError("point is outside the prime-order subgroup");
  return p;
}

}  // namespace

void write_g1(Bytes& out, const G1Affine& p) { write_point(out, p); }
void write_g2(Bytes& out, const G2Affine& p) { write_point(out, p); }
G1Affine read_g1(ByteReader& r) { return read_point<Fq>(r); }
G2Affine read_g2(ByteReader& r) { return read_point<Fq2>(r); }

}  // namespace hermes::pairing
