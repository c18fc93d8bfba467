#pragma once

// Groth16 over the active pairing instantiation.
//
// Key structure follows the standard construction: public-input terms in the verifying
// key are (beta A_j + alpha B_j + C_j) / gamma and private terms in the proving key are
// the same combination over delta. The quotient query is expressed in the Lagrange basis
// of the points n+1..2n-1 rather than powers of tau; both span the polynomials of degree
// at most n-2, so H(tau) t(tau) / delta is the same group element either way.

#include <optional>
#include <vector>

#include "hermes/pairing/toy_curve.hpp"
#include "hermes/qap/qap.hpp"

namespace hermes::groth16 {

using pairing::G1;
using pairing::G1Affine;
using pairing::G2;
using pairing::G2Affine;
using pairing::Gt;

struct ProvingKey {
  Digest circuit_hash{};
  std::uint32_t num_constraints = 0;  // n
  std::uint32_t num_wires = 0;        // m + 1
  std::uint32_t num_public = 0;       // l

  G1Affine alpha_g1, beta_g1, delta_g1;
  G2Affine beta_g2, delta_g2;
  std::vector<G1Affine> a_query;     // A_j(tau) g1, m + 1
  std::vector<G1Affine> b_g1_query;  // B_j(tau) g1, m + 1
  std::vector<G2Affine> b_g2_query;  // B_j(tau) g2, m + 1
  std::vector<G1Affine> h_query;     // M_k(tau) t(tau) / delta g1, n - 1
  std::vector<G1Affine> l_query;     // private (beta A_j + alpha B_j + C_j) / delta g1, m - l

  Bytes serialize() const;
  /// ParseError on malformed data, wrong curve profile or (when given) a different circuit.
  static ProvingKey deserialize(ByteSpan data, const std::optional<Digest>& expected_hash = std::nullopt);
  bool operator==(const ProvingKey&) const = default;
};

struct VerificationKey {
  Digest circuit_hash{};
  G1Affine alpha_g1;
  G2Affine beta_g2, gamma_g2, delta_g2;
  std::vector<G1Affine> ic;  // l + 1 entries, constant-one term first
  Gt alpha_beta;             // e(alpha g1, beta g2)

  std::size_t num_public() const { return ic.empty() ? 0 : ic.size() - 1; }

  Bytes serialize() const;
  static VerificationKey deserialize(ByteSpan data, const std::optional<Digest>& expected_hash = std::nullopt);
  bool operator==(const VerificationKey&) const = default;
};

struct Proof {
  G1Affine a;
  G2Affine b;
  G1Affine c;

  Bytes serialize() const;
  static Proof deserialize(ByteSpan data);
  bool operator==(const Proof&) const = default;
};

/// Serialized proof length: tag, curve profile, A, B, C.
inline constexpr std::size_t kProofBytes = 2 + 2 * pairing::kG1Bytes + pairing::kG2Bytes;

struct KeyPair {
  ProvingKey pk;
  VerificationKey vk;
};

/// Samples the trapdoor from `rng` and derives both keys. Deterministic for a seeded Rng.
KeyPair setup(const qap::QapInstance& qap, Rng& rng);

/// Proof for a satisfying witness; InvalidWitness (and no proof) otherwise.
Proof prove(const ProvingKey& pk, const qap::QapInstance& qap, const r1cs::Witness& w, Rng& rng);

/// Checks e(A, B) = e(alpha, beta) e(IC(x), gamma) e(C, delta). UsageError when the number
/// of public inputs differs from the key.
bool verify(const VerificationKey& vk, const Proof& proof, std::span<const Fr> public_inputs);

/// IC(x) = ic_0 + sum x_i ic_i.
G1 public_input_commitment(const VerificationKey& vk, std::span<const Fr> public_inputs);

}  // namespace hermes::groth16
