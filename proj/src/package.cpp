#include "hermes/protocol/package.hpp"

#include <algorithm>
#include <cstring>

#include "hermes/field/encoding.hpp"

namespace hermes::protocol {

using field::DTypeTag;

std::string nonce_label(std::size_t limb) { return "nu" + std::to_string(limb); }

std::array<Fr, 4> nonce_limbs(const Nonce& nonce) {
  std::array<Fr, 4> out;
  ByteReader rd(nonce);
  for (auto& limb : out) limb = Fr::from_u64(rd.u32());
  return out;
}

Nonce random_nonce(Rng& rng) {
  Nonce n;
  rng.fill(n);
  return n;
}

namespace {

std::size_t public_index(const r1cs::ConstraintSystem& cs, const std::string& label) {
  if (!cs.has_wire(label)) throw UsageError("circuit has no public wire '" + label + "'");
  std::uint32_t w = cs.find_wire(label);
  if (cs.visibility(w) != r1cs::Visibility::kPublic) throw UsageError("wire '" + label + "' is not public");
  return w - 1;
}

Bytes encode_nonce(const Nonce& n) {
  return field::encode<Fr>(Bytes(n.begin(), n.end()), DTypeTag::kNonce);
}

void section(Bytes& out, std::uint8_t tag, ByteSpan body) {
  out.push_back(tag);
  put_le(out, static_cast<std::uint32_t>(body.size()));
  put_bytes(out, body);
}

ByteSpan read_section(ByteReader& rd, std::uint8_t expected) {
  std::uint8_t tag = rd.u8();
  if (tag != expected) {
    throw ParseError("package section out of order: expected tag " + std::to_string(expected) + ", got " +
                     std::to_string(tag));
  }
  std::uint32_t len = rd.u32();
  return rd.take(len);
}

Digest digest_from(ByteSpan s) {
  if (s.size() != 32) throw ParseError("digest section needs 32 bytes");
  Digest d;
  std::memcpy(d.data(), s.data(), 32);
  return d;
}

constexpr char kPackageMagic[4] = {'H', 'S', 'P', 'G'};
constexpr std::uint8_t kPackageVersion = 1;
constexpr char kLayoutMagic[4] = {'H', 'S', 'L', 'Y'};

}  // namespace

PublicLayout PublicLayout::from_system(const r1cs::ConstraintSystem& cs) {
  PublicLayout l;
  l.delta_commit = public_index(cs, kLabelDeltaCommit);
  l.commitment = public_index(cs, kLabelCommitment);
  l.timestamp = public_index(cs, kLabelTimestamp);
  for (std::size_t i = 0; i < 4; ++i) l.nonce[i] = public_index(cs, nonce_label(i));
  l.num_public = cs.num_public();
  return l;
}

Bytes PublicLayout::serialize() const {
  Bytes out(kLayoutMagic, kLayoutMagic + 4);
  for (std::size_t v : {num_public, delta_commit, commitment, timestamp, nonce[0], nonce[1], nonce[2], nonce[3]})
    put_le(out, static_cast<std::uint32_t>(v));
  return out;
}

PublicLayout PublicLayout::deserialize(ByteSpan data) {
  ByteReader rd(data);
  if (std::memcmp(rd.take(4).data(), kLayoutMagic, 4) != 0) throw ParseError("not a public-input layout");
  PublicLayout l;
  l.num_public = rd.u32();
  l.delta_commit = rd.u32();
  l.commitment = rd.u32();
  l.timestamp = rd.u32();
  for (auto& n : l.nonce) n = rd.u32();
  rd.expect_done();
  for (std::size_t v : {l.delta_commit, l.commitment, l.timestamp, l.nonce[0], l.nonce[1], l.nonce[2], l.nonce[3]})
    if (v >= l.num_public) throw ParseError("layout index outside the public inputs");
  return l;
}

Bytes assemble_payload(const DomainSeparator& sign_ctx, const Digest& r1cs_hash, const Digest& vk_hash,
                       const Certificate& cert, const groth16::Proof& proof, const Fr& c, std::uint64_t timestamp,
                       const Nonce& nonce) {
  Bytes m;
  put_bytes(m, field::encode<Fr>(std::uint64_t{sign_ctx.value()}, DTypeTag::kCtx));
  put_bytes(m, r1cs_hash);
  put_bytes(m, vk_hash);
  put_bytes(m, sha256(cert.serialize()));
  put_bytes(m, sha256(proof.serialize()));
  put_bytes(m, field::encode<Fr>(c, DTypeTag::kCommit));
  put_bytes(m, field::encode<Fr>(timestamp, DTypeTag::kTs));
  put_bytes(m, encode_nonce(nonce));
  return m;
}

Bytes ProofPackage::serialize() const {
  Bytes out(kPackageMagic, kPackageMagic + 4);
  out.push_back(kPackageVersion);
  section(out, static_cast<std::uint8_t>(DTypeTag::kProof), proof.serialize());
  section(out, static_cast<std::uint8_t>(DTypeTag::kCommit), field::encode<Fr>(commitment, DTypeTag::kCommit));
  section(out, static_cast<std::uint8_t>(DTypeTag::kTs), field::encode<Fr>(timestamp, DTypeTag::kTs));
  section(out, static_cast<std::uint8_t>(DTypeTag::kNonce), encode_nonce(nonce));
  section(out, static_cast<std::uint8_t>(DTypeTag::kCert), cert.serialize());
  section(out, static_cast<std::uint8_t>(DTypeTag::kVk), vk_hash);
  section(out, static_cast<std::uint8_t>(DTypeTag::kR1cs), r1cs_hash);
  Bytes x;
  put_le(x, static_cast<std::uint32_t>(public_inputs.size()));
  for (const auto& v : public_inputs) v.write_bytes(x);
  section(out, kSectionPublicInputs, x);
  section(out, kSectionSignature, sigma.serialize());
  section(out, kSectionVkSig, encode_vk_sig(vk_sig));
  return out;
}

ProofPackage ProofPackage::deserialize(ByteSpan data) {
  ByteReader rd(data);
  if (data.size() < 5 || std::memcmp(rd.take(4).data(), kPackageMagic, 4) != 0) throw ParseError("not a proof package");
  if (rd.u8() != kPackageVersion) throw ParseError("unsupported package version");
  ProofPackage p;
  p.proof = groth16::Proof::deserialize(read_section(rd, static_cast<std::uint8_t>(DTypeTag::kProof)));
  p.commitment =
      std::get<Fr>(field::decode<Fr>(read_section(rd, static_cast<std::uint8_t>(DTypeTag::kCommit)), DTypeTag::kCommit));
  p.timestamp = std::get<std::uint64_t>(
      field::decode<Fr>(read_section(rd, static_cast<std::uint8_t>(DTypeTag::kTs)), DTypeTag::kTs));
  Bytes nonce = std::get<Bytes>(
      field::decode<Fr>(read_section(rd, static_cast<std::uint8_t>(DTypeTag::kNonce)), DTypeTag::kNonce));
  std::memcpy(p.nonce.data(), nonce.data(), p.nonce.size());
  p.cert = Certificate::deserialize(read_section(rd, static_cast<std::uint8_t>(DTypeTag::kCert)));
  p.vk_hash = digest_from(read_section(rd, static_cast<std::uint8_t>(DTypeTag::kVk)));
  p.r1cs_hash = digest_from(read_section(rd, static_cast<std::uint8_t>(DTypeTag::kR1cs)));
  {
    ByteReader x(read_section(rd, kSectionPublicInputs));
    std::uint32_t n = x.u32();
    if (n > x.remaining() / Fr::kByteWidth) throw ParseError("public-input count exceeds section length");
    p.public_inputs.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) p.public_inputs.push_back(Fr::from_bytes(x.take(Fr::kByteWidth)));
    x.expect_done();
  }
  p.sigma = Signature::deserialize(read_section(rd, kSectionSignature));
  p.vk_sig = decode_vk_sig(read_section(rd, kSectionVkSig));
  rd.expect_done();
  return p;
}

Nonce stamp_inputs(r1cs::Assignment& inputs, std::uint64_t now, Rng& rng) {
  Nonce n = random_nonce(rng);
  auto limbs = nonce_limbs(n);
  inputs[kLabelTimestamp] = Fr::from_u64(now);
  for (std::size_t i = 0; i < 4; ++i) inputs[nonce_label(i)] = limbs[i];
  inputs[kLabelBlinding] = commitment::BlindingFactor::sample(rng).value;
  return n;
}

ProofPackage create_package(const ProverContext& ctx, const r1cs::Assignment& inputs, Rng& rng) {
  const auto& cs = ctx.qap.system();
  const PublicLayout& layout = ctx.record.layout;
  r1cs::Witness w = cs.generate_witness(inputs);
  ProofPackage p;
  p.public_inputs = cs.public_inputs(w);
  p.proof = groth16::prove(ctx.pk, ctx.qap, w, rng);
  p.commitment = p.public_inputs.at(layout.commitment);
  p.timestamp = p.public_inputs.at(layout.timestamp).to_u64();
  {
    Bytes nb;
    for (std::size_t i = 0; i < 4; ++i) {
      std::uint64_t limb = p.public_inputs.at(layout.nonce[i]).to_u64();
      if (limb >> 32) throw UsageError("nonce limb does not fit 32 bits");
      put_le(nb, static_cast<std::uint32_t>(limb));
    }
    std::memcpy(p.nonce.data(), nb.data(), p.nonce.size());
  }
  p.cert = ctx.cert;
  p.vk_hash = ctx.record.vk_hash();
  p.r1cs_hash = ctx.pk.circuit_hash;
  p.vk_sig = ctx.key.vk;
  Bytes m = assemble_payload(sign_tag(ctx.record.app_id), p.r1cs_hash, p.vk_hash, p.cert, p.proof, p.commitment,
                             p.timestamp, p.nonce);
  p.sigma = sign(ctx.key, m);
  return p;
}

const char* reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::kNone: return "none";
    case RejectReason::kCertificate: return "bad-certificate";
    case RejectReason::kContext: return "context-mismatch";
    case RejectReason::kSignature: return "bad-signature";
    case RejectReason::kStale: return "stale-timestamp";
    case RejectReason::kReplay: return "nonce-replay";
    case RejectReason::kProof: return "bad-proof";
    case RejectReason::kNonceStoreFull: return "nonce-store-full";
  }
  return "unknown";
}

VerifierState::VerifierState(const G1Affine& ea_root, std::int64_t window_seconds, std::size_t nonce_capacity)
    : ea_root_(ea_root), window_(window_seconds), capacity_(nonce_capacity) {
  if (window_seconds < 0) throw UsageError("freshness window must be non-negative");
}

void VerifierState::register_circuit(const Digest& r1cs_hash, CircuitRecord record) {
  if (record.vk.circuit_hash != r1cs_hash) throw UsageError("verification key belongs to another circuit");
  if (record.layout.num_public != record.vk.num_public()) throw UsageError("layout does not match the key");
  registry_[r1cs_hash] = std::move(record);
}

const CircuitRecord* VerifierState::find(const Digest& r1cs_hash) const {
  auto it = registry_.find(r1cs_hash);
  return it == registry_.end() ? nullptr : &it->second;
}

namespace {
std::string nonce_key(const Nonce& n) { return std::string(n.begin(), n.end()); }
}  // namespace

bool VerifierState::nonce_seen(const Nonce& nonce, std::int64_t now) const {
  std::lock_guard lock(mu_);
  auto it = nonces_.find(nonce_key(nonce));
  return it != nonces_.end() && it->second >= now;
}

VerifierState::RecordResult VerifierState::record_nonce(const Nonce& nonce, std::int64_t now) {
  std::lock_guard lock(mu_);
  std::string key = nonce_key(nonce);
  auto it = nonces_.find(key);
  if (it != nonces_.end() && it->second >= now) return RecordResult::kDuplicate;
  if (nonces_.size() >= capacity_) purge_locked(now);
  if (nonces_.size() >= capacity_ && it == nonces_.end()) return RecordResult::kFull;
  const std::int64_t expiry = now + retention();
  if (it != nonces_.end()) {
    // Expired entry being reused: drop its old index first.
    auto range = expiry_.equal_range(it->second);
    for (auto e = range.first; e != range.second; ++e) {
      if (e->second == key) {
        expiry_.erase(e);
        break;
      }
    }
    it->second = expiry;
  } else {
    nonces_.emplace(key, expiry);
  }
  expiry_.emplace(expiry, std::move(key));
  return RecordResult::kRecorded;
}

std::size_t VerifierState::nonce_count() const {
  std::lock_guard lock(mu_);
  return nonces_.size();
}

std::vector<std::pair<Nonce, std::int64_t>> VerifierState::nonce_entries() const {
  std::lock_guard lock(mu_);
  std::vector<std::pair<Nonce, std::int64_t>> out;
  for (const auto& [expiry, key] : expiry_) {
    Nonce n;
    std::copy(key.begin(), key.end(), n.begin());
    out.emplace_back(n, expiry);
  }
  return out;
}

void VerifierState::restore_nonce(const Nonce& nonce, std::int64_t expiry) {
  std::lock_guard lock(mu_);
  std::string key = nonce_key(nonce);
  if (nonces_.contains(key)) throw UsageError("nonce restored twice");
  nonces_.emplace(key, expiry);
  expiry_.emplace(expiry, std::move(key));
}

void VerifierState::purge(std::int64_t now) {
  std::lock_guard lock(mu_);
  purge_locked(now);
}

void VerifierState::purge_locked(std::int64_t now) {
  while (!expiry_.empty() && expiry_.begin()->first < now) {
    nonces_.erase(expiry_.begin()->second);
    expiry_.erase(expiry_.begin());
  }
}

namespace {

VerifyResult reject(RejectReason r, std::string detail) { return {false, r, std::move(detail)}; }

}  // namespace

VerifyResult verify_package(VerifierState& state, const ProofPackage& pkg, std::int64_t now) {
  const std::uint64_t unow = now < 0 ? 0 : static_cast<std::uint64_t>(now);
  // 1. Certificate chain and key binding.
  if (!verify_certificate(state.ea_root(), pkg.cert, unow)) {
    return reject(RejectReason::kCertificate, "certificate not valid under the EA root at this time");
  }
  if (!(pkg.cert.vk_sig == pkg.vk_sig)) return reject(RejectReason::kCertificate, "vk_sig differs from the certificate");

  // 2. Context: registered circuit, application, key and the values bound in X.
  const CircuitRecord* rec = state.find(pkg.r1cs_hash);
  if (rec == nullptr) return reject(RejectReason::kContext, "unknown circuit hash");
  if (state.expected_app() && *state.expected_app() != rec->app_id) {
    return reject(RejectReason::kContext, "circuit belongs to another application");
  }
  if (pkg.vk_hash != rec->vk_hash()) return reject(RejectReason::kContext, "verification key hash mismatch");
  const auto& x = pkg.public_inputs;
  const auto& l = rec->layout;
  if (x.size() != l.num_public) return reject(RejectReason::kContext, "wrong number of public inputs");
  if (!(x[l.delta_commit] == Fr::from_u64(commit_tag(rec->app_id).value()))) {
    return reject(RejectReason::kContext, "commitment domain tag mismatch");
  }
  if (!(x[l.commitment] == pkg.commitment)) return reject(RejectReason::kContext, "commitment differs from X");
  if (!(x[l.timestamp] == Fr::from_u64(pkg.timestamp))) return reject(RejectReason::kContext, "timestamp differs from X");
  auto limbs = nonce_limbs(pkg.nonce);
  for (std::size_t i = 0; i < 4; ++i)
    if (!(x[l.nonce[i]] == limbs[i])) return reject(RejectReason::kContext, "nonce differs from X");

  // 3. Signature over the reconstructed payload.
  Bytes m = assemble_payload(sign_tag(rec->app_id), pkg.r1cs_hash, rec->vk_hash(), pkg.cert, pkg.proof, pkg.commitment,
                             pkg.timestamp, pkg.nonce);
  if (!verify_sign(pkg.vk_sig, pkg.sigma, m)) return reject(RejectReason::kSignature, "signature does not verify");

  // 4. Freshness.
  const std::int64_t ts = static_cast<std::int64_t>(pkg.timestamp);
  const std::int64_t skew = now >= ts ? now - ts : ts - now;
  if (pkg.timestamp > static_cast<std::uint64_t>(INT64_MAX) || skew > state.window()) {
    return reject(RejectReason::kStale, "timestamp outside the freshness window");
  }

  // 5. Nonce.
  if (state.nonce_seen(pkg.nonce, now)) return reject(RejectReason::kReplay, "nonce already processed");

  // 6. Proof.
  if (!groth16::verify(rec->vk, pkg.proof, x)) return reject(RejectReason::kProof, "proof does not verify");

  switch (state.record_nonce(pkg.nonce, now)) {
    case VerifierState::RecordResult::kRecorded: return {true, RejectReason::kNone, {}};
    case VerifierState::RecordResult::kDuplicate: return reject(RejectReason::kReplay, "nonce already processed");
    case VerifierState::RecordResult::kFull: return reject(RejectReason::kNonceStoreFull, "nonce store full");
  }
  return reject(RejectReason::kNonceStoreFull, "unreachable");
}

}  // namespace hermes::protocol
