#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "hermes/field/profiles.hpp"
#include "hermes/util/sha256.hpp"

namespace hermes::commitment {

inline constexpr std::string_view kSpongeSeed = "HERMES-SEAL-POSEIDON-v1";
inline constexpr std::size_t kWidth = 3;
inline constexpr std::size_t kRate = 2;

/// Poseidon-style permutation parameters: x^alpha S-box, full rounds split around the
/// partial rounds, Cauchy MDS matrix. Constants come from SHA-256 in counter mode over
/// the seed string, each 32-byte block reduced modulo p.
template <typename F>
struct SpongeParams {
  unsigned alpha = 0;
  unsigned full_rounds = 0;
  unsigned partial_rounds = 0;
  std::vector<std::array<F, kWidth>> round_constants;
  std::array<std::array<F, kWidth>, kWidth> mds{};

  unsigned total_rounds() const { return full_rounds + partial_rounds; }
  bool is_full_round(unsigned r) const {
    return r < full_rounds / 2 || r >= full_rounds / 2 + partial_rounds;
  }

  static SpongeParams derive(unsigned alpha, unsigned full_rounds, unsigned partial_rounds);
  /// The per-profile parameter set (cached).
  static const SpongeParams& standard();
};

/// Deterministic element stream: block k is SHA-256(seed || u64le(k)) reduced mod p.
template <typename F>
class ConstantStream {
 public:
  explicit ConstantStream(std::string_view seed) : seed_(seed) {}
  F next() {
    Sha256 h;
    h.update(seed_);
    Bytes ctr;
    put_le(ctr, counter_++);
    h.update(ctr);
    Digest d = h.finish();
    return F::from_bytes_reduce(d);
  }

 private:
  std::string_view seed_;
  std::uint64_t counter_ = 0;
};

template <typename F>
F determinant3(const std::array<std::array<F, kWidth>, kWidth>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <typename F>
SpongeParams<F> SpongeParams<F>::derive(unsigned alpha, unsigned full_rounds, unsigned partial_rounds) {
  SpongeParams p;
  p.alpha = alpha;
  p.full_rounds = full_rounds;
  p.partial_rounds = partial_rounds;
  ConstantStream<F> stream(kSpongeSeed);
  p.round_constants.resize(full_rounds + partial_rounds);
  for (auto& rc : p.round_constants)
    for (auto& c : rc) c = stream.next();
  // Cauchy matrix 1 / (x_i + y_j); redraw until the entries exist and it is invertible.
  for (;;) {
    std::array<F, kWidth> xs, ys;
    for (auto& x : xs) x = stream.next();
    for (auto& y : ys) y = stream.next();
    bool ok = true;
    for (std::size_t i = 0; i < kWidth && ok; ++i)
      for (std::size_t j = 0; j < kWidth && ok; ++j) ok = !(xs[i] + ys[j]).is_zero();
    if (!ok) continue;
    for (std::size_t i = 0; i < kWidth; ++i)
      for (std::size_t j = 0; j < kWidth; ++j) p.mds[i][j] = (xs[i] + ys[j]).inverse();
    if (!determinant3(p.mds).is_zero()) break;
  }
  return p;
}

template <typename F>
const SpongeParams<F>& SpongeParams<F>::standard() {
  // x^3 needs gcd(3, p-1) = 1, which the 61-bit test profile has; BN254's scalar field uses x^5.
  static const SpongeParams p = F::profile_id() == field::TestFr::profile_id() ? derive(3, 8, 56) : derive(5, 8, 57);
  return p;
}

template <typename F>
F sbox(const F& x, unsigned alpha) {
  return x.pow(static_cast<std::uint64_t>(alpha));
}

template <typename F>
void permute(std::array<F, kWidth>& s, const SpongeParams<F>& p) {
  for (unsigned r = 0; r < p.total_rounds(); ++r) {
    for (std::size_t i = 0; i < kWidth; ++i) s[i] += p.round_constants[r][i];
    if (p.is_full_round(r)) {
      for (auto& x : s) x = sbox(x, p.alpha);
    } else {
      s[0] = sbox(s[0], p.alpha);
    }
    std::array<F, kWidth> t{};
    for (std::size_t i = 0; i < kWidth; ++i)
      for (std::size_t j = 0; j < kWidth; ++j) t[i] += p.mds[i][j] * s[j];
    s = t;
  }
}

/// Initial capacity word: L * 2^64 + 1 for an input of L elements.
template <typename F>
F capacity_pad(std::size_t length) {
  return F::from_u64(length) * F::from_u64(2).pow(std::uint64_t{64}) + F::one();
}

/// Sponge hash: state (capacity, rate0, rate1); inputs absorbed two at a time with the
/// final chunk zero-padded; at least one permutation; output is rate0.
template <typename F>
F sponge_hash(std::span<const F> inputs, const SpongeParams<F>& p = SpongeParams<F>::standard()) {
  std::array<F, kWidth> s{capacity_pad<F>(inputs.size()), F::zero(), F::zero()};
  std::size_t i = 0;
  do {
    for (std::size_t k = 0; k < kRate && i < inputs.size(); ++k, ++i) s[1 + k] += inputs[i];
    permute(s, p);
  } while (i < inputs.size());
  return s[1];
}

inline Fr sponge_hash(std::initializer_list<Fr> inputs) {
  std::vector<Fr> v(inputs);
  return sponge_hash<Fr>(std::span<const Fr>(v));
}

/// SHA-256 of raw bytes.
inline Digest byte_hash(ByteSpan data) { return sha256(data); }

}  // namespace hermes::commitment
