#include "hermes/protocol/signature.hpp"

#include "hermes/util/sha256.hpp"

namespace hermes::protocol {

namespace {

constexpr std::string_view kNonceDomain = "hermes-schnorr-nonce";
constexpr std::string_view kChallengeDomain = "hermes-schnorr-challenge";
constexpr std::uint8_t kCertVersion = 1;

const pairing::G1Table& base_table() {
  static const pairing::G1Table table(pairing::G1(pairing::g1_generator()));
  return table;
}

Fr challenge(const G1Affine& r, const G1Affine& vk, const Digest& digest) {
  Bytes buf;
  pairing::write_g1(buf, r);
  pairing::write_g1(buf, vk);
  put_bytes(buf, digest);
  Sha256 h;
  h.update(kChallengeDomain);
  h.update(buf);
  return Fr::from_bytes_reduce(h.finish());
}

Fr derive_nonce(const Fr& sk, const Digest& digest) {
  for (std::uint32_t ctr = 0;; ++ctr) {
    Bytes buf = sk.to_bytes();
    put_bytes(buf, digest);
    put_le(buf, ctr);
    Sha256 h;
    h.update(kNonceDomain);
    h.update(buf);
    Fr k = Fr::from_bytes_reduce(h.finish());
    if (!k.is_zero()) return k;
  }
}

}  // namespace

Bytes Signature::serialize() const {
  Bytes out;
  pairing::write_g1(out, r);
  s.write_bytes(out);
  return out;
}

Signature Signature::deserialize(ByteSpan data) {
  ByteReader rd(data);
  Signature sig;
  sig.r = pairing::read_g1(rd);
  sig.s = Fr::from_bytes(rd.take(Fr::kByteWidth));
  rd.expect_done();
  return sig;
}

SigningKey keygen(Rng& rng) {
  Fr sk = Fr::random_nonzero(rng);
  return {sk, base_table().mul(sk).to_affine()};
}

SigningKey keygen_from_seed(std::uint64_t seed) {
  Rng rng(seed, "hermes-signing-key");
  return keygen(rng);
}

Signature sign(const SigningKey& key, ByteSpan message) {
  const Digest digest = sha256(message);
  const Fr k = derive_nonce(key.sk, digest);
  const G1Affine r = base_table().mul(k).to_affine();
  return {r, k + challenge(r, key.vk, digest) * key.sk};
}

bool verify_sign(const G1Affine& vk, const Signature& sigma, ByteSpan message) {
  if (vk.infinity || !vk.on_curve() || !pairing::in_subgroup(vk)) return false;
  if (!sigma.r.on_curve() || !pairing::in_subgroup(sigma.r)) return false;
  const Digest digest = sha256(message);
  const Fr e = challenge(sigma.r, vk, digest);
  pairing::G1 lhs = base_table().mul(sigma.s);
  pairing::G1 rhs = pairing::G1(sigma.r) + e * pairing::G1(vk);
  return lhs == rhs;
}

Bytes encode_vk_sig(const G1Affine& vk) {
  Bytes out;
  pairing::write_g1(out, vk);
  return out;
}

G1Affine decode_vk_sig(ByteSpan data) {
  ByteReader rd(data);
  G1Affine vk = pairing::read_g1(rd);
  rd.expect_done();
  if (vk.infinity) throw ParseError("signature key is the identity");
  return vk;
}

Bytes Certificate::body() const {
  if (vid.size() > 0xffff) throw UsageError("vehicle id too long");
  Bytes out;
  out.push_back(kCertVersion);
  put_le(out, static_cast<std::uint16_t>(vid.size()));
  out.insert(out.end(), vid.begin(), vid.end());
  pairing::write_g1(out, vk_sig);
  put_le(out, not_before);
  put_le(out, not_after);
  return out;
}

Bytes Certificate::serialize() const {
  Bytes out = body();
  put_bytes(out, issuer_sig.serialize());
  return out;
}

Certificate Certificate::deserialize(ByteSpan data) {
  ByteReader rd(data);
  if (rd.u8() != kCertVersion) throw ParseError("unsupported certificate version");
  Certificate c;
  std::size_t len = rd.uint(2);
  ByteSpan id = rd.take(len);
  c.vid.assign(id.begin(), id.end());
  c.vk_sig = pairing::read_g1(rd);
  c.not_before = rd.u64();
  c.not_after = rd.u64();
  c.issuer_sig = Signature::deserialize(rd.take(kSignatureBytes));
  rd.expect_done();
  return c;
}

Certificate issue_certificate(const SigningKey& ea, std::string vid, const G1Affine& vk_sig, std::uint64_t not_before,
                              std::uint64_t not_after) {
  if (not_after < not_before) throw UsageError("certificate validity window is empty");
  Certificate c{std::move(vid), vk_sig, not_before, not_after, {}};
  c.issuer_sig = sign(ea, c.body());
  return c;
}

bool verify_certificate(const G1Affine& ea_root, const Certificate& cert, std::uint64_t now) {
  if (now < cert.not_before || now > cert.not_after) return false;
  if (cert.vk_sig.infinity) return false;
  return verify_sign(ea_root, cert.issuer_sig, cert.body());
}

}  // namespace hermes::protocol
