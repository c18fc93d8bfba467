#include "hermes/protocol/deployment.hpp"

namespace hermes::protocol {

Deployment::Deployment(r1cs::ConstraintSystem cs, std::uint8_t app_id, Rng& rng)
    : cs_(std::make_unique<r1cs::ConstraintSystem>(std::move(cs))) {
  qap_ = std::make_unique<qap::QapInstance>(qap::r1cs_to_qap(*cs_));
  keys_ = groth16::setup(*qap_, rng);
  record_.app_id = app_id;
  init();
}

Deployment::Deployment(r1cs::ConstraintSystem cs, std::uint8_t app_id, groth16::KeyPair keys)
    : cs_(std::make_unique<r1cs::ConstraintSystem>(std::move(cs))), keys_(std::move(keys)) {
  hash_ = cs_->hash();
  if (keys_.pk.circuit_hash != hash_ || keys_.vk.circuit_hash != hash_) {
    throw UsageError("keys were generated for a different circuit");
  }
  qap_ = std::make_unique<qap::QapInstance>(qap::r1cs_to_qap(*cs_));
  record_.app_id = app_id;
  init();
}

void Deployment::init() {
  hash_ = cs_->hash();
  record_.vk = keys_.vk;
  record_.layout = PublicLayout::from_system(*cs_);
}

}  // namespace hermes::protocol
