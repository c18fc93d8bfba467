#pragma once

// Toy pairing-friendly curve: y^2 = x^3 + x over F_p with p = 4q - 1 (p = 3 mod 4).
// The curve is supersingular with embedding degree 2; G2 is the image of G1 under the
// distortion map (x, y) -> (-x, i y) and GT is the order-q subgroup of F_{p^2}^*.
// NOT cryptographically secure: the 63-bit base field only supports correctness tests.
// Every serialized artifact carries kCurveProfile so this can never be mistaken for a
// production curve.

#include <concepts>
#include <span>
#include <utility>
#include <vector>

#include "hermes/field/profiles.hpp"
#include "hermes/pairing/curve_point.hpp"
#include "hermes/pairing/fp2.hpp"
#include "hermes/pairing/msm.hpp"

namespace hermes::pairing {

using Fq = field::ToyFq;
using Fq2 = Fp2<Fq>;

using G1 = CurvePoint<Fq>;
using G1Affine = AffinePoint<Fq>;
using G2 = CurvePoint<Fq2>;
using G2Affine = AffinePoint<Fq2>;

/// Profile byte stamped into every key, proof and package: toy 61-bit curve, insecure.
inline constexpr std::uint8_t kCurveProfile = 0x01;

inline constexpr std::size_t kG1Bytes = 1 + 2 * Fq::kByteWidth;
inline constexpr std::size_t kG2Bytes = 1 + 2 * Fq2::kByteWidth;
inline constexpr std::size_t kGtBytes = Fq2::kByteWidth;

/// Element of the target group (order-q subgroup of F_{p^2}^*), written multiplicatively.
class Gt {
 public:
  Gt() : v_(Fq2::one()) {}
  explicit Gt(const Fq2& v) : v_(v) {}

  static Gt identity() { return Gt(); }
  bool is_identity() const { return v_ == Fq2::one(); }
  const Fq2& value() const { return v_; }

  Gt operator*(const Gt& o) const { return Gt(v_ * o.v_); }
  Gt& operator*=(const Gt& o) { return *this = *this * o; }
  Gt inverse() const { return Gt(v_.conjugate()); }  // unitary elements: inverse = conjugate
  Gt pow(const Fr& e) const { return Gt(v_.pow(e.to_int())); }
  bool operator==(const Gt& o) const { return v_ == o.v_; }

  void write_bytes(Bytes& out) const { v_.write_bytes(out); }
  static Gt read(ByteReader& r);

 private:
  Fq2 v_;
};

const G1Affine& g1_generator();
const G2Affine& g2_generator();

/// (x, y) -> (-x, i y): maps E(F_p)[q] onto a second, independent order-q subgroup.
G2Affine distort(const G1Affine& p);

bool in_subgroup(const G1Affine& p);
bool in_subgroup(const G2Affine& p);

G1 operator*(const Fr& s, const G1& p);
G2 operator*(const Fr& s, const G2& p);

/// Reduced Tate pairing e(P, Q) = f_{q,P}(Q)^((p^2 - 1) / q).
Gt pair(const G1Affine& p, const G2Affine& q);

/// Product of pairings with a single final exponentiation.
Gt multi_pair(std::span<const std::pair<G1Affine, G2Affine>> terms);

G1 msm_g1(std::span<const Fr> scalars, std::span<const G1Affine> bases);
G2 msm_g2(std::span<const Fr> scalars, std::span<const G2Affine> bases);

using G1Table = FixedBaseTable<G1, Fr>;
using G2Table = FixedBaseTable<G2, Fr>;

/// Uncompressed little-endian affine coordinates behind a flag byte (0 finite, 1 identity).
void write_g1(Bytes& out, const G1Affine& p);
void write_g2(Bytes& out, const G2Affine& p);
/// Decoders reject bad flags, off-curve points and points outside the order-q subgroup.
G1Affine read_g1(ByteReader& r);
G2Affine read_g2(ByteReader& r);

/// Interface a pairing instantiation provides to the proof system. The toy curve is the
/// active instantiation; a production curve plugs in by satisfying the same surface.
template <typename C>
concept BilinearGroup = requires(const typename C::G1Affine& a, const typename C::G2Affine& b,
                                 const typename C::Scalar& s) {
  { C::pair(a, b) } -> std::same_as<typename C::Gt>;
  { C::g1() } -> std::convertible_to<typename C::G1Affine>;
  { C::g2() } -> std::convertible_to<typename C::G2Affine>;
  { C::profile } -> std::convertible_to<std::uint8_t>;
};

struct ToyCurve {
  using Scalar = Fr;
  using G1Affine = pairing::G1Affine;
  using G2Affine = pairing::G2Affine;
  using Gt = pairing::Gt;
  static constexpr std::uint8_t profile = kCurveProfile;
  static Gt pair(const G1Affine& a, const G2Affine& b) { return pairing::pair(a, b); }
  static const G1Affine& g1() { return g1_generator(); }
  static const G2Affine& g2() { return g2_generator(); }
};

static_assert(BilinearGroup<ToyCurve>);

}  // namespace hermes::pairing
