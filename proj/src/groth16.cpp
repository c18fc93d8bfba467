#include "hermes/groth16/groth16.hpp"

#include <algorithm>
#include <cstring>

#include "hermes/field/batch.hpp"
#include "hermes/field/encoding.hpp"

namespace hermes::groth16 {

using pairing::kCurveProfile;

namespace {

/// Trapdoor values, wiped when setup returns.
struct ToxicWaste {
  Fr alpha, beta, gamma, delta, tau;

  ~ToxicWaste() {
    volatile unsigned char* p = reinterpret_cast<volatile unsigned char*>(this);
    for (std::size_t i = 0; i < sizeof(*this); ++i) p[i] = 0;
  }
};

Fr sample_tau(Rng& rng, std::size_t n) {
  // tau must avoid both the domain {1..n} and the quotient points {n+1..2n-1}.
  for (;;) {
    Fr t = Fr::random_nonzero(rng);
    std::uint64_t v = t.to_u64();
    if (v >= 1 && v <= 2 * n - 1) continue;
    return t;
  }
}

constexpr char kPkMagic[4] = {'H', 'S', 'P', 'K'};

void write_header(Bytes& out, std::uint8_t tag_byte, const Digest& hash) {
  out.push_back(tag_byte);
  out.push_back(kCurveProfile);
  out.push_back(Fr::profile_id());
  put_bytes(out, hash);
}

Digest read_header(ByteReader& r, std::uint8_t tag_byte, const std::optional<Digest>& expected) {
  if (r.u8() != tag_byte) throw ParseError("unexpected artifact type tag");
  if (r.u8() != kCurveProfile) throw ParseError("curve profile mismatch");
  if (r.u8() != Fr::profile_id()) throw ParseError("field profile mismatch");
  Digest hash;
  ByteSpan raw = r.take(hash.size());
  std::copy(raw.begin(), raw.end(), hash.begin());
  if (expected && *expected != hash) throw ParseError("circuit hash mismatch: key belongs to a different circuit");
  return hash;
}

template <typename T, typename Write>
void write_vec(Bytes& out, const std::vector<T>& v, Write write) {
  put_le(out, static_cast<std::uint32_t>(v.size()));
  for (const auto& p : v) write(out, p);
}

template <typename T, typename Read>
std::vector<T> read_vec(ByteReader& r, std::size_t min_bytes, Read read) {
  std::uint32_t count = r.u32();
  if (static_cast<std::uint64_t>(count) * min_bytes > r.remaining()) throw ParseError("vector length exceeds data");
  std::vector<T> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(read(r));
  return out;
}

}  // namespace

KeyPair setup(const qap::QapInstance& qap, Rng& rng) {
  const auto& cs = qap.system();
  if (!qap.domain().is_consecutive()) throw UsageError("setup expects the consecutive evaluation domain");
  const std::size_t n = cs.num_constraints();
  const std::size_t m1 = cs.num_wires();
  const std::size_t l = cs.num_public();

  ToxicWaste tw{Fr::random_nonzero(rng), Fr::random_nonzero(rng), Fr::random_nonzero(rng),
                Fr::random_nonzero(rng), sample_tau(rng, n)};

  auto ev = qap.evaluate_at(tw.tau);
  const Fr gamma_inv = tw.gamma.inverse();
  const Fr delta_inv = tw.delta.inverse();

  // Lagrange basis of {n+1, ..., 2n-1} at tau.
  std::vector<Fr> h_scalars;
  if (n > 1) {
    const std::size_t count = n - 1;
    std::vector<Fr> weights = qap::consecutive_weights(count);
    std::vector<Fr> diffs(count);
    Fr t_ext = Fr::one();
    for (std::size_t k = 1; k <= count; ++k) {
      diffs[k - 1] = tw.tau - Fr::from_u64(n + k);
      t_ext *= diffs[k - 1];
    }
    field::batch_inverse<Fr>(diffs);
    const Fr scale = t_ext * ev.t * delta_inv;
    h_scalars.resize(count);
    for (std::size_t k = 0; k < count; ++k) h_scalars[k] = scale * weights[k] * diffs[k];
  }

  std::vector<Fr> ic_scalars(l + 1), l_scalars(m1 - l - 1);
  for (std::size_t j = 0; j < m1; ++j) {
    Fr combined = tw.beta * ev.a[j] + tw.alpha * ev.b[j] + ev.c[j];
    if (j <= l) ic_scalars[j] = combined * gamma_inv;
    else l_scalars[j - l - 1] = combined * delta_inv;
  }

  const G1 g1(pairing::g1_generator());
  const G2 g2(pairing::g2_generator());
  pairing::G1Table t1(g1);
  pairing::G2Table t2(g2);

  KeyPair kp;
  ProvingKey& pk = kp.pk;
  pk.circuit_hash = cs.hash();
  pk.num_constraints = static_cast<std::uint32_t>(n);
  pk.num_wires = static_cast<std::uint32_t>(m1);
  pk.num_public = static_cast<std::uint32_t>(l);
  pk.alpha_g1 = t1.mul(tw.alpha).to_affine();
  pk.beta_g1 = t1.mul(tw.beta).to_affine();
  pk.delta_g1 = t1.mul(tw.delta).to_affine();
  pk.beta_g2 = t2.mul(tw.beta).to_affine();
  pk.delta_g2 = t2.mul(tw.delta).to_affine();
  pk.a_query = t1.batch_mul(ev.a);
  pk.b_g1_query = t1.batch_mul(ev.b);
  pk.b_g2_query = t2.batch_mul(ev.b);
  pk.h_query = t1.batch_mul(h_scalars);
  pk.l_query = t1.batch_mul(l_scalars);

  VerificationKey& vk = kp.vk;
  vk.circuit_hash = pk.circuit_hash;
  vk.alpha_g1 = pk.alpha_g1;
  vk.beta_g2 = pk.beta_g2;
  vk.gamma_g2 = t2.mul(tw.gamma).to_affine();
  vk.delta_g2 = pk.delta_g2;
  vk.ic = t1.batch_mul(ic_scalars);
  vk.alpha_beta = pairing::pair(vk.alpha_g1, vk.beta_g2);
  return kp;
}

Proof prove(const ProvingKey& pk, const qap::QapInstance& qap, const r1cs::Witness& w, Rng& rng) {
  const auto& cs = qap.system();
  if (cs.num_constraints() != pk.num_constraints || cs.num_wires() != pk.num_wires ||
      cs.num_public() != pk.num_public) {
    throw UsageError("proving key does not match the constraint system dimensions");
  }
  if (w.size() != pk.num_wires) throw UsageError("witness length does not match the proving key");
  // Fails with InvalidWitness before any group work if a constraint is violated.
  std::vector<Fr> h = qap::quotient_evaluations(qap, w);

  const Fr r = Fr::random(rng);
  const Fr s = Fr::random(rng);
  const std::span<const Fr> all(w.values);
  const std::span<const Fr> priv = all.subspan(pk.num_public + 1);

  G1 a = G1(pk.alpha_g1) + pairing::msm_g1(all, pk.a_query) + r * G1(pk.delta_g1);
  G2 b2 = G2(pk.beta_g2) + pairing::msm_g2(all, pk.b_g2_query) + s * G2(pk.delta_g2);
  G1 b1 = G1(pk.beta_g1) + pairing::msm_g1(all, pk.b_g1_query) + s * G1(pk.delta_g1);
  G1 c = pairing::msm_g1(priv, pk.l_query) + pairing::msm_g1(h, pk.h_query) + s * a + r * b1 -
         (r * s) * G1(pk.delta_g1);

  Proof proof;
  proof.a = a.to_affine();
  proof.b = b2.to_affine();
  proof.c = c.to_affine();
  return proof;
}

G1 public_input_commitment(const VerificationKey& vk, std::span<const Fr> public_inputs) {
  if (public_inputs.size() != vk.num_public()) {
    throw UsageError("expected " + std::to_string(vk.num_public()) + " public inputs, got " +
                     std::to_string(public_inputs.size()));
  }
  std::span<const G1Affine> bases(vk.ic);
  return G1(vk.ic[0]) + pairing::msm_g1(public_inputs, bases.subspan(1));
}

bool verify(const VerificationKey& vk, const Proof& proof, std::span<const Fr> public_inputs) {
  G1 ic = public_input_commitment(vk, public_inputs);
  if (!pairing::in_subgroup(proof.a) || !pairing::in_subgroup(proof.b) || !pairing::in_subgroup(proof.c)) {
    return false;
  }
  const std::pair<G1Affine, G2Affine> terms[] = {
      {proof.a, proof.b},
      {(-ic).to_affine(), vk.gamma_g2},
      {proof.c.negate(), vk.delta_g2},
  };
  return pairing::multi_pair(terms) == vk.alpha_beta;
}

// ---- Serialization ----

Bytes Proof::serialize() const {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(field::DTypeTag::kProof));
  out.push_back(kCurveProfile);
  pairing::write_g1(out, a);
  pairing::write_g2(out, b);
  pairing::write_g1(out, c);
  return out;
}

Proof Proof::deserialize(ByteSpan data) {
  ByteReader r(data);
  if (r.u8() != static_cast<std::uint8_t>(field::DTypeTag::kProof)) throw ParseError("not a proof (bad tag)");
  if (r.u8() != kCurveProfile) throw ParseError("curve profile mismatch");
  Proof p;
  p.a = pairing::read_g1(r);
  p.b = pairing::read_g2(r);
  p.c = pairing::read_g1(r);
  r.expect_done();
  return p;
}

Bytes VerificationKey::serialize() const {
  Bytes out;
  write_header(out, static_cast<std::uint8_t>(field::DTypeTag::kVk), circuit_hash);
  pairing::write_g1(out, alpha_g1);
  pairing::write_g2(out, beta_g2);
  pairing::write_g2(out, gamma_g2);
  pairing::write_g2(out, delta_g2);
  write_vec(out, ic, pairing::write_g1);
  alpha_beta.write_bytes(out);
  return out;
}

VerificationKey VerificationKey::deserialize(ByteSpan data, const std::optional<Digest>& expected_hash) {
  ByteReader r(data);
  VerificationKey vk;
  vk.circuit_hash = read_header(r, static_cast<std::uint8_t>(field::DTypeTag::kVk), expected_hash);
  vk.alpha_g1 = pairing::read_g1(r);
  vk.beta_g2 = pairing::read_g2(r);
  vk.gamma_g2 = pairing::read_g2(r);
  vk.delta_g2 = pairing::read_g2(r);
  vk.ic = read_vec<G1Affine>(r, pairing::kG1Bytes, pairing::read_g1);
  if (vk.ic.empty()) throw ParseError("verification key has no input terms");
  vk.alpha_beta = Gt::read(r);
  r.expect_done();
  if (!(vk.alpha_beta == pairing::pair(vk.alpha_g1, vk.beta_g2))) {
    throw ParseError("verification key pairing precompute is inconsistent");
  }
  return vk;
}

Bytes ProvingKey::serialize() const {
  Bytes out(kPkMagic, kPkMagic + 4);
  write_header(out, 0, circuit_hash);
  put_le(out, num_constraints);
  put_le(out, num_wires);
  put_le(out, num_public);
  pairing::write_g1(out, alpha_g1);
  pairing::write_g1(out, beta_g1);
  pairing::write_g1(out, delta_g1);
  pairing::write_g2(out, beta_g2);
  pairing::write_g2(out, delta_g2);
  write_vec(out, a_query, pairing::write_g1);
  write_vec(out, b_g1_query, pairing::write_g1);
  write_vec(out, b_g2_query, pairing::write_g2);
  write_vec(out, h_query, pairing::write_g1);
  write_vec(out, l_query, pairing::write_g1);
  return out;
}

ProvingKey ProvingKey::deserialize(ByteSpan data, const std::optional<Digest>& expected_hash) {
  ByteReader r(data);
  ByteSpan magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), kPkMagic)) throw ParseError("not a proving key (bad magic)");
  ProvingKey pk;
  pk.circuit_hash = read_header(r, 0, expected_hash);
  pk.num_constraints = r.u32();
  pk.num_wires = r.u32();
  pk.num_public = r.u32();
  pk.alpha_g1 = pairing::read_g1(r);
  pk.beta_g1 = pairing::read_g1(r);
  pk.delta_g1 = pairing::read_g1(r);
  pk.beta_g2 = pairing::read_g2(r);
  pk.delta_g2 = pairing::read_g2(r);
  pk.a_query = read_vec<G1Affine>(r, pairing::kG1Bytes, pairing::read_g1);
  pk.b_g1_query = read_vec<G1Affine>(r, pairing::kG1Bytes, pairing::read_g1);
  pk.b_g2_query = read_vec<G2Affine>(r, pairing::kG2Bytes, pairing::read_g2);
  pk.h_query = read_vec<G1Affine>(r, pairing::kG1Bytes, pairing::read_g1);
  pk.l_query = read_vec<G1Affine>(r, pairing::kG1Bytes, pairing::read_g1);
  r.expect_done();
  const std::size_t m1 = pk.num_wires;
  if (pk.num_constraints == 0 || pk.num_public >= m1 || pk.a_query.size() != m1 || pk.b_g1_query.size() != m1 ||
      pk.b_g2_query.size() != m1 || pk.h_query.size() != pk.num_constraints - 1 ||
      pk.l_query.size() != m1 - pk.num_public - 1) {
    throw ParseError("proving key vector lengths are inconsistent");
  }
  return pk;
}

}  // namespace hermes::groth16
