#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hermes/commitment/commitment.hpp"
#include "hermes/groth16/groth16.hpp"
#include "hermes/protocol/domain.hpp"
#include "hermes/protocol/signature.hpp"
#include "hermes/r1cs/constraint_system.hpp"

namespace hermes::protocol {

using Nonce = std::array<std::uint8_t, 16>;

/// Wire labels every protocol circuit exposes as public inputs.
inline constexpr const char* kLabelDeltaCommit = "delta_commit";
inline constexpr const char* kLabelCommitment = "c";
inline constexpr const char* kLabelTimestamp = "T";
inline constexpr const char* kLabelBlinding = "s_sec";
std::string nonce_label(std::size_t limb);

/// Nonce as four 32-bit little-endian limbs, the form it takes inside X.
std::array<Fr, 4> nonce_limbs(const Nonce& nonce);
Nonce random_nonce(Rng& rng);

/// Positions of the protocol-bound values inside the public-input vector X.
struct PublicLayout {
  std::size_t delta_commit = 0;
  std::size_t commitment = 0;
  std::size_t timestamp = 0;
  std::array<std::size_t, 4> nonce{};
  std::size_t num_public = 0;

  /// Finds the standard labels; UsageError when one is missing or not public.
  static PublicLayout from_system(const r1cs::ConstraintSystem& cs);
  Bytes serialize() const;
  static PublicLayout deserialize(ByteSpan data);
  bool operator==(const PublicLayout&) const = default;
};

/// What a verifier knows about one approved circuit.
struct CircuitRecord {
  groth16::VerificationKey vk;
  std::uint8_t app_id = 0;
  PublicLayout layout;
  Digest vk_hash() const { return sha256(vk.serialize()); }
};

/// m_sig: Enc_CTX(sign tag) || H(R1CS) || H(vk) || H(cert) || H(proof) || Enc_COMMIT(c) || Enc_TS(T) || Enc_NONCE(nu).
Bytes assemble_payload(const DomainSeparator& sign_ctx, const Digest& r1cs_hash, const Digest& vk_hash,
                       const Certificate& cert, const groth16::Proof& proof, const Fr& c, std::uint64_t timestamp,
                       const Nonce& nonce);

struct ProofPackage {
  groth16::Proof proof;
  std::vector<Fr> public_inputs;
  Fr commitment;
  std::uint64_t timestamp = 0;
  Nonce nonce{};
  Certificate cert;
  Digest vk_hash{};
  Digest r1cs_hash{};
  Signature sigma;
  G1Affine vk_sig;

  /// "HSPG" v1, then tagged length-prefixed sections in a fixed order.
  Bytes serialize() const;
  static ProofPackage deserialize(ByteSpan data);
  bool operator==(const ProofPackage&) const = default;
};

/// Section ids beyond the datatype tags.
inline constexpr std::uint8_t kSectionPublicInputs = 0x10;
inline constexpr std::uint8_t kSectionSignature = 0x11;
inline constexpr std::uint8_t kSectionVkSig = 0x12;

/// Everything the prover holds for one circuit.
struct ProverContext {
  const groth16::ProvingKey& pk;
  const qap::QapInstance& qap;
  const CircuitRecord& record;
  const SigningKey& key;
  const Certificate& cert;
};

/// Sets T, the nonce limbs and a fresh s_sec in `inputs`; returns the nonce.
Nonce stamp_inputs(r1cs::Assignment& inputs, std::uint64_t now, Rng& rng);

/// Witness, proof, payload and signature. Inputs must already carry T, nu and s_sec.
ProofPackage create_package(const ProverContext& ctx, const r1cs::Assignment& inputs, Rng& rng);

enum class RejectReason {
  kNone,
  kCertificate,
  kContext,
  kSignature,
  kStale,
  kReplay,
  kProof,
  kNonceStoreFull,
};

const char* reason_name(RejectReason r);

struct VerifyResult {
  bool accepted = false;
  RejectReason reason = RejectReason::kNone;
  std::string detail;
  explicit operator bool() const { return accepted; }
};

/// Registry, EA root, freshness window and nonce store. Only the nonce store mutates; it
/// is guarded so concurrent verify_package calls are safe.
class VerifierState {
 public:
  explicit VerifierState(const G1Affine& ea_root, std::int64_t window_seconds = 5,
                         std::size_t nonce_capacity = std::size_t{1} << 20);
  VerifierState(const VerifierState&) = delete;
  VerifierState& operator=(const VerifierState&) = delete;

  void register_circuit(const Digest& r1cs_hash, CircuitRecord record);
  const CircuitRecord* find(const Digest& r1cs_hash) const;
  /// When set, only circuits of this application are accepted.
  void expect_app(std::optional<std::uint8_t> app) { expected_app_ = app; }
  std::optional<std::uint8_t> expected_app() const { return expected_app_; }

  const G1Affine& ea_root() const { return ea_root_; }
  std::int64_t window() const { return window_; }
  std::int64_t retention() const { return 2 * window_; }

  bool nonce_seen(const Nonce& nonce, std::int64_t now) const;
  /// Atomically checks and records; false when already present or the store is full.
  enum class RecordResult { kRecorded, kDuplicate, kFull };
  RecordResult record_nonce(const Nonce& nonce, std::int64_t now);
  std::size_t nonce_count() const;
  void purge(std::int64_t now);

  /// Snapshot of (nonce, expiry) for persistence, and the inverse.
  std::vector<std::pair<Nonce, std::int64_t>> nonce_entries() const;
  void restore_nonce(const Nonce& nonce, std::int64_t expiry);

 private:
  void purge_locked(std::int64_t now);

  G1Affine ea_root_;
  std::int64_t window_;
  std::size_t capacity_;
  std::optional<std::uint8_t> expected_app_;
  std::map<Digest, CircuitRecord> registry_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::int64_t> nonces_;  // nonce -> expiry
  std::multimap<std::int64_t, std::string> expiry_;
};

/// Certificate, context, signature, freshness, nonce, proof; the first failure is reported.
/// On accept the nonce is recorded.
VerifyResult verify_package(VerifierState& state, const ProofPackage& pkg, std::int64_t now);

/// EA audit: the opening matches the logged commitment.
inline bool audit_open(const Fr& c, std::span<const Fr> message, const Fr& s_sec) {
  return commitment::verify_commitment({c}, message, {s_sec});
}

}  // namespace hermes::protocol
