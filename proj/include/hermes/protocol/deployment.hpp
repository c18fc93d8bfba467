#pragma once

#include <memory>

#include "hermes/protocol/package.hpp"

namespace hermes::protocol {

/// One approved circuit with its keys. Owns the constraint system so the QAP view and
/// the prover context stay valid for the object's lifetime.
class Deployment {
 public:
  /// Runs the trusted setup with `rng`.
  Deployment(r1cs::ConstraintSystem cs, std::uint8_t app_id, Rng& rng);
  /// Adopts existing keys; UsageError when they were made for another circuit.
  Deployment(r1cs::ConstraintSystem cs, std::uint8_t app_id, groth16::KeyPair keys);

  const r1cs::ConstraintSystem& system() const { return *cs_; }
  const qap::QapInstance& qap() const { return *qap_; }
  const groth16::KeyPair& keys() const { return keys_; }
  const CircuitRecord& record() const { return record_; }
  std::uint8_t app_id() const { return record_.app_id; }
  const Digest& r1cs_hash() const { return hash_; }

  ProverContext prover(const SigningKey& key, const Certificate& cert) const {
    return {keys_.pk, *qap_, record_, key, cert};
  }
  void register_with(VerifierState& state) const { state.register_circuit(hash_, record_); }

 private:
  void init();

  std::unique_ptr<r1cs::ConstraintSystem> cs_;
  std::unique_ptr<qap::QapInstance> qap_;
  groth16::KeyPair keys_;
  CircuitRecord record_;
  Digest hash_{};
};

}  // namespace hermes::protocol
