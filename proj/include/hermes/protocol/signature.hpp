#pragma once

#include <string>

#include "hermes/pairing/toy_curve.hpp"
#include "hermes/util/rng.hpp"

namespace hermes::protocol {

using pairing::G1Affine;

/// Schnorr over G1 with a SHA-256 challenge and a nonce derived from (sk, H(m)).
struct SigningKey {
  Fr sk;
  G1Affine vk;
};

struct Signature {
  G1Affine r;
  Fr s;

  Bytes serialize() const;
  static Signature deserialize(ByteSpan data);
  bool operator==(const Signature&) const = default;
};

inline constexpr std::size_t kSignatureBytes = pairing::kG1Bytes + Fr::kByteWidth;

SigningKey keygen(Rng& rng);
SigningKey keygen_from_seed(std::uint64_t seed);

/// sigma = PerformSignature(sk, H(m)).
Signature sign(const SigningKey& key, ByteSpan message);
bool verify_sign(const G1Affine& vk, const Signature& sigma, ByteSpan message);

Bytes encode_vk_sig(const G1Affine& vk);
/// ParseError on malformed points, points outside the subgroup, or the identity.
G1Affine decode_vk_sig(ByteSpan data);

/// One-level certificate binding a vehicle identity to its signing key, issued by the EA root.
struct Certificate {
  std::string vid;
  G1Affine vk_sig;
  std::uint64_t not_before = 0;
  std::uint64_t not_after = 0;
  Signature issuer_sig;

  /// The signed portion.
  Bytes body() const;
  /// Enc_CERT: body followed by the issuer signature.
  Bytes serialize() const;
  static Certificate deserialize(ByteSpan data);
  bool operator==(const Certificate&) const = default;
};

Certificate issue_certificate(const SigningKey& ea, std::string vid, const G1Affine& vk_sig, std::uint64_t not_before,
                              std::uint64_t not_after);

/// Issuer signature valid under `ea_root` and `now` inside the validity window.
bool verify_certificate(const G1Affine& ea_root, const Certificate& cert, std::uint64_t now);

}  // namespace hermes::protocol
