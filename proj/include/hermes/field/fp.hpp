#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "hermes/field/bigint.hpp"
#include "hermes/util/bytes.hpp"
#include "hermes/util/error.hpp"
#include "hermes/util/rng.hpp"

namespace hermes::field {

/// Element of the prime field F_p, stored in Montgomery form.
///
/// `Params` supplies kLimbs, kModulus, kGenerator (a multiplicative generator),
/// kTwoAdicity, kName and kProfileId. Values are always fully reduced, so equality is
/// plain limb equality.
template <typename Params>
class Fp {
 public:
  static constexpr std::size_t kLimbs = Params::kLimbs;
  using Int = BigInt<kLimbs>;

  static constexpr Int kModulus = Params::kModulus;
  static constexpr std::size_t kBits = kModulus.num_bits();
  static constexpr std::size_t kByteWidth = (kBits + 7) / 8;
  /// Largest b such that every b-bit integer is below p.
  static constexpr std::size_t kCapacityBits = kBits - 1;

 private:
  static constexpr std::uint64_t compute_inv() {
    // -p^{-1} mod 2^64 by Newton iteration.
    std::uint64_t inv = 1;
    for (int i = 0; i < 7; ++i) inv *= 2 - kModulus.limbs[0] * inv;
    return ~inv + 1;
  }

  static constexpr Int double_mod(Int x) {
    std::uint64_t carry = x.add_in_place(x);
    if (carry != 0 || x >= kModulus) x.sub_in_place(kModulus);
    return x;
  }

  static constexpr Int pow2_mod(std::size_t k) {
    Int x(1);
    for (std::size_t i = 0; i < k; ++i) x = double_mod(x);
    return x;
  }

 public:
  static constexpr std::uint64_t kInv = compute_inv();
  static constexpr Int kR = pow2_mod(64 * kLimbs);
  static constexpr Int kR2 = pow2_mod(128 * kLimbs);

  constexpr Fp() = default;

  static constexpr Fp zero() { return Fp(); }
  static constexpr Fp one() { return from_raw_mont(kR); }

  static constexpr Fp from_u64(std::uint64_t v) {
    Int x;
    x.limbs[0] = v;
    if constexpr (kLimbs == 1) x.limbs[0] = v % kModulus.limbs[0];
    return from_canonical(x);
  }

  /// Signed integers map negatives to p - |v|.
  static constexpr Fp from_i64(std::int64_t v) {
    if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
    // Two's complement negation stays well-defined for INT64_MIN.
    return -from_u64(~static_cast<std::uint64_t>(v) + 1);
  }

  /// Canonical integer in [0, p); anything else is rejected.
  static Fp from_int(const Int& v) {
    if (v >= kModulus) throw MathError("integer not below the field modulus");
    return from_canonical(v);
  }

  /// Little-endian bytes of any length, reduced modulo p.
  static Fp from_bytes_reduce(ByteSpan data) {
    Fp acc;
    const Fp shift = pow2_64();
    std::size_t chunks = (data.size() + 7) / 8;
    for (std::size_t c = chunks; c-- > 0;) {
      std::uint64_t limb = 0;
      for (std::size_t i = 0; i < 8 && 8 * c + i < data.size(); ++i) {
        limb |= static_cast<std::uint64_t>(data[8 * c + i]) << (8 * i);
      }
      acc = acc * shift + from_u64(limb);
    }
    return acc;
  }

  /// Decimal string, reduced modulo p.
  static Fp from_decimal(std::string_view digits) {
    if (digits.empty()) throw ParseError("empty decimal string");
    Fp acc;
    const Fp ten = from_u64(10);
    for (char ch : digits) {
      if (ch < '0' || ch > '9') throw ParseError("invalid decimal digit");
      acc = acc * ten + from_u64(static_cast<std::uint64_t>(ch - '0'));
    }
    return acc;
  }

  /// Canonical kByteWidth-byte little-endian form.
  static Fp from_bytes(ByteSpan data) {
    if (data.size() != kByteWidth) {
      throw ParseError("field element needs " + std::to_string(kByteWidth) + " bytes, got " +
                       std::to_string(data.size()));
    }
    Int v;
    for (std::size_t i = 0; i < kByteWidth; ++i) {
      v.limbs[i / 8] |= static_cast<std::uint64_t>(data[i]) << (8 * (i % 8));
    }
    if (v >= kModulus) throw ParseError("field element bytes encode a value >= p");
    return from_canonical(v);
  }

  void write_bytes(Bytes& out) const {
    Int v = to_int();
    for (std::size_t i = 0; i < kByteWidth; ++i) {
      out.push_back(static_cast<std::uint8_t>(v.limbs[i / 8] >> (8 * (i % 8))));
    }
  }

  Bytes to_bytes() const {
    Bytes out;
    out.reserve(kByteWidth);
    write_bytes(out);
    return out;
  }

  /// Uniform sample by rejection.
  static Fp random(Rng& rng) {
    for (;;) {
      Int v;
      for (std::size_t i = 0; i < kLimbs; ++i) v.limbs[i] = rng.next_u64();
      std::size_t top = kBits - 64 * (kLimbs - 1);
      if (top < 64) v.limbs[kLimbs - 1] &= (std::uint64_t{1} << top) - 1;
      if (v < kModulus) return from_canonical(v);
    }
  }

  static Fp random_nonzero(Rng& rng) {
    for (;;) {
      Fp v = random(rng);
      if (!v.is_zero()) return v;
    }
  }

  constexpr Int to_int() const { return mont_mul(mont_, Int(1)); }
  std::uint64_t to_u64() const {
    Int v = to_int();
    for (std::size_t i = 1; i < kLimbs; ++i)
      if (v.limbs[i] != 0) throw MathError("field element does not fit in 64 bits");
    return v.limbs[0];
  }
  std::string to_string() const { return to_int().to_decimal(); }

  constexpr bool is_zero() const { return mont_.is_zero(); }
  constexpr bool operator==(const Fp& o) const { return mont_ == o.mont_; }

  constexpr Fp& operator+=(const Fp& o) {
    if constexpr (kLimbs == 1) {
      // p < 2^63 for single-limb profiles, so the sum cannot overflow.
      std::uint64_t s = mont_.limbs[0] + o.mont_.limbs[0];
      if (s >= kModulus.limbs[0]) s -= kModulus.limbs[0];
      mont_.limbs[0] = s;
    } else {
      std::uint64_t carry = mont_.add_in_place(o.mont_);
      if (carry != 0 || mont_ >= kModulus) mont_.sub_in_place(kModulus);
    }
    return *this;
  }

  constexpr Fp& operator-=(const Fp& o) {
    if constexpr (kLimbs == 1) {
      std::uint64_t a = mont_.limbs[0];
      std::uint64_t b = o.mont_.limbs[0];
      mont_.limbs[0] = a >= b ? a - b : a + (kModulus.limbs[0] - b);
    } else {
      if (mont_.sub_in_place(o.mont_) != 0) mont_.add_in_place(kModulus);
    }
    return *this;
  }

  constexpr Fp& operator*=(const Fp& o) {
    mont_ = mont_mul(mont_, o.mont_);
    return *this;
  }

  friend constexpr Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend constexpr Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend constexpr Fp operator*(Fp a, const Fp& b) { return a *= b; }
  constexpr Fp operator-() const { return Fp() - *this; }

  constexpr Fp square() const { return *this * *this; }
  constexpr Fp dbl() const { return *this + *this; }

  constexpr Fp pow(const Int& e) const {
    Fp result = one();
    for (std::size_t i = e.num_bits(); i-- > 0;) {
      result = result.square();
      if (e.bit(i)) result *= *this;
    }
    return result;
  }
  constexpr Fp pow(std::uint64_t e) const { return pow(Int(e)); }

  /// Multiplicative inverse; zero has none.
  Fp inverse() const {
    if (is_zero()) throw MathError("division by zero: inverse of 0 in F_p");
    Int e = kModulus;
    e.sub_in_place(Int(2));
    return pow(e);
  }

  /// True when the canonical value is at most (p-1)/2.
  bool is_lower_half() const {
    Int half = kModulus;
    half.shr1();
    return to_int() <= half;
  }

  /// Primitive 2^log_n-th root of unity.
  static Fp root_of_unity(std::uint32_t log_n) {
    if (log_n > Params::kTwoAdicity) throw UsageError("requested root of unity exceeds 2-adicity");
    Int e = kModulus;
    e.sub_in_place(Int(1));
    for (std::uint32_t i = 0; i < log_n; ++i) e.shr1();
    return from_u64(Params::kGenerator).pow(e);
  }

  static constexpr const char* name() { return Params::kName; }
  static constexpr std::uint8_t profile_id() { return Params::kProfileId; }
  static constexpr std::uint32_t two_adicity() { return Params::kTwoAdicity; }

  /// Raw Montgomery limbs; only for hashing containers.
  constexpr const Int& mont_repr() const { return mont_; }

 private:
  static constexpr Fp from_raw_mont(const Int& m) {
    Fp f;
    f.mont_ = m;
    return f;
  }

  static constexpr Fp from_canonical(const Int& v) { return from_raw_mont(mont_mul(v, kR2)); }

  static Fp pow2_64() {
    Fp two = from_u64(2);
    return two.pow(std::uint64_t{64});
  }

  static constexpr Int mont_mul(const Int& a, const Int& b) {
    if constexpr (kLimbs == 1) {
      static_assert(kModulus.limbs[0] < (std::uint64_t{1} << 63), "single-limb profiles need p < 2^63");
      const std::uint64_t p = kModulus.limbs[0];
      u128 t = static_cast<u128>(a.limbs[0]) * b.limbs[0];
      std::uint64_t m = static_cast<std::uint64_t>(t) * kInv;
      u128 u = t + static_cast<u128>(m) * p;
      std::uint64_t r = static_cast<std::uint64_t>(u >> 64);
      if (r >= p) r -= p;
      Int out;
      out.limbs[0] = r;
      return out;
    } else {
      // CIOS Montgomery multiplication.
      std::uint64_t t[kLimbs + 2] = {};
      for (std::size_t i = 0; i < kLimbs; ++i) {
        std::uint64_t c = 0;
        for (std::size_t j = 0; j < kLimbs; ++j) {
          u128 s = static_cast<u128>(a.limbs[j]) * b.limbs[i] + t[j] + c;
          t[j] = static_cast<std::uint64_t>(s);
          c = static_cast<std::uint64_t>(s >> 64);
        }
        u128 s = static_cast<u128>(t[kLimbs]) + c;
        t[kLimbs] = static_cast<std::uint64_t>(s);
        t[kLimbs + 1] = static_cast<std::uint64_t>(s >> 64);

        std::uint64_t m = t[0] * kInv;
        s = static_cast<u128>(m) * kModulus.limbs[0] + t[0];
        c = static_cast<std::uint64_t>(s >> 64);
        for (std::size_t j = 1; j < kLimbs; ++j) {
          s = static_cast<u128>(m) * kModulus.limbs[j] + t[j] + c;
          t[j - 1] = static_cast<std::uint64_t>(s);
          c = static_cast<std::uint64_t>(s >> 64);
        }
        s = static_cast<u128>(t[kLimbs]) + c;
        t[kLimbs - 1] = static_cast<std::uint64_t>(s);
        t[kLimbs] = t[kLimbs + 1] + static_cast<std::uint64_t>(s >> 64);
      }
      Int out;
      for (std::size_t i = 0; i < kLimbs; ++i) out.limbs[i] = t[i];
      if (t[kLimbs] != 0 || out >= kModulus) out.sub_in_place(kModulus);
      return out;
    }
  }

  Int mont_{};
};

}  // namespace hermes::field
