#include <fstream>
#include <set>

#include "doctest.h"
#include "hermes/commitment/commitment.hpp"
#include "hermes/commitment/sponge_gadget.hpp"
#include "hermes/r1cs/constraint_system.hpp"
#include "json.hpp"

using namespace hermes;
using namespace hermes::commitment;
using hermes::r1cs::Builder;
using hermes::r1cs::LC;

namespace {

nlohmann::json golden() {
  std::ifstream in(std::string(HERMES_DATA_DIR) + "/sponge_vectors.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

template <typename F>
void check_profile(const nlohmann::json& prof) {
  const auto& p = SpongeParams<F>::standard();
  CHECK(p.alpha == prof["alpha"].get<unsigned>());
  CHECK(p.full_rounds == prof["full_rounds"].get<unsigned>());
  CHECK(p.partial_rounds == prof["partial_rounds"].get<unsigned>());
  CHECK(p.round_constants[0][0] == F::from_decimal(prof["first_round_constant"].get<std::string>()));
  CHECK(p.mds[0][0] == F::from_decimal(prof["mds00"].get<std::string>()));
  for (const auto& v : prof["vectors"]) {
    std::vector<F> in;
    for (const auto& s : v["inputs"]) in.push_back(F::from_decimal(s.get<std::string>()));
    CHECK(sponge_hash<F>(std::span<const F>(in)) == F::from_decimal(v["hash"].get<std::string>()));
  }
}

}  // namespace

TEST_CASE("sponge matches the pinned golden vectors on both profiles") {
  auto g = golden();
  CHECK(g["seed"] == std::string(kSpongeSeed));
  check_profile<field::TestFr>(g["profiles"]["test-61"]);
  check_profile<field::StandardFr>(g["profiles"]["standard-254"]);
  // sponge_hash([0]) pinned directly as well.
  CHECK(sponge_hash({Fr::zero()}) == Fr::from_u64(389301376037266205ULL));
}

TEST_CASE("sponge parameters are well formed") {
  const auto& p = SpongeParams<Fr>::standard();
  CHECK(p.round_constants.size() == p.total_rounds());
  CHECK(!determinant3(p.mds).is_zero());
  // x^alpha is a permutation of the field: alpha is invertible mod p - 1.
  auto pm1 = Fr::kModulus.limbs[0] - 1;
  CHECK(pm1 % p.alpha != 0);
  unsigned full = 0;
  for (unsigned r = 0; r < p.total_rounds(); ++r) full += p.is_full_round(r);
  CHECK(full == p.full_rounds);
  CHECK(p.is_full_round(0));
  CHECK(!p.is_full_round(p.full_rounds / 2));
  CHECK(p.is_full_round(p.total_rounds() - 1));
}

TEST_CASE("sponge determinism and length padding") {
  Rng rng(60);
  for (int i = 0; i < 50; ++i) {
    Fr a = Fr::random(rng);
    CHECK(sponge_hash({a}) == sponge_hash({a}));
    CHECK(sponge_hash({a}) != sponge_hash({a, Fr::zero()}));
    CHECK(sponge_hash({a, Fr::zero()}) != sponge_hash({a, Fr::zero(), Fr::zero()}));
  }
  CHECK(sponge_hash({}) != sponge_hash({Fr::zero()}));
}

TEST_CASE("byte hash is SHA-256") {
  CHECK(to_hex(byte_hash({})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  std::string abc = "abc";
  Bytes b(abc.begin(), abc.end());
  CHECK(to_hex(byte_hash(b)) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("gadget agrees with the native sponge") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t len = 1 + trial % 5;
    Builder b;
    std::vector<LC> wires;
    r1cs::Assignment in;
    std::vector<Fr> vals;
    for (std::size_t i = 0; i < len; ++i) {
      std::string name = "x" + std::to_string(i);
      wires.emplace_back(b.alloc_private(name));
      vals.push_back(Fr::random(rng));
      in[name] = vals.back();
    }
    std::size_t before = b.num_constraints();
    LC h = sponge_gadget(b, wires);
    CHECK(b.num_constraints() - before == sponge_gadget_cost(len));
    b.output("h", h);
    auto cs = b.finalize();
    auto w = cs.generate_witness(in);
    CHECK(cs.public_inputs(w)[0] == sponge_hash<Fr>(vals));
  }
}

TEST_CASE("forged gadget output is unsatisfiable and counts are stable") {
  auto build = [] {
    Builder b;
    std::vector<LC> in{LC(b.alloc_private("m")), LC(b.alloc_private("s"))};
    b.output("c", sponge_gadget(b, in));
    return b.finalize();
  };
  auto cs = build();
  CHECK(cs.num_constraints() == build().num_constraints());
  CHECK(cs.hash() == build().hash());
  // 8 full rounds x 3 S-boxes + 56 partial rounds, two constraints per cube, the output,
  // and the consistency rows for the one-wire and c.
  CHECK(cs.num_constraints() == 2 * (8 * 3 + 56) + 1 + 2);
  r1cs::Assignment in{{"m", Fr::from_u64(5)}, {"s", Fr::from_u64(9)}};
  auto good = cs.generate_witness(in);
  CHECK(cs.public_inputs(good)[0] == sponge_hash({Fr::from_u64(5), Fr::from_u64(9)}));
  auto forged = cs.solve(in, {{"c", Fr::from_u64(1234)}});
  CHECK(!cs.is_satisfied(forged));
  CHECK_THROWS_AS(cs.generate_witness({{"m", Fr::from_u64(5)}}), UsageError);
}

TEST_CASE("commit, open and verify") {
  Rng rng(62);
  std::vector<Fr> m{Fr::from_u64(42), Fr::from_u64(7), Fr::from_u64(2563)};
  BlindingFactor s = BlindingFactor::sample(rng);
  Commitment c = commit(m, s);
  CHECK(commit(m, s) == c);
  CHECK(c.c == sponge_hash({m[0], m[1], m[2], s.value}));
  CHECK(verify_commitment(c, m, s));
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto bad = m;
    bad[i] += Fr::one();
    CHECK(!verify_commitment(c, bad, s));
  }
  CHECK(!verify_commitment(c, m, BlindingFactor{s.value + Fr::one()}));
  for (int i = 0; i < 50; ++i) {
    BlindingFactor s1 = BlindingFactor::sample(rng), s2 = BlindingFactor::sample(rng);
    if (s1 == s2) continue;
    CHECK(commit(m, s1) != commit(m, s2));
  }
  auto fresh = commit_fresh(m, rng);
  CHECK(verify_commitment(fresh.commitment, fresh.opening));
  // Blinding factors carry 128 bits of entropy before reduction.
  std::set<std::uint64_t> distinct;
  for (int i = 0; i < 1000; ++i) distinct.insert(BlindingFactor::sample(rng).value.to_u64());
  CHECK(distinct.size() == 1000);
}

TEST_CASE("collision game on a truncated hash finds collisions near the birthday bound") {
  Rng rng(63);
  auto rep = game_collision(2000, 16, rng);
  CHECK(rep.attempts == 2000);
  CHECK(rep.output_bits == 16);
  REQUIRE(rep.first_collision_at.has_value());
  CHECK(*rep.first_collision_at < 1500);
  CHECK(rep.collisions > 0);
  // Full width: nothing.
  auto full = game_collision(20000, 0, rng);
  CHECK(full.collisions == 0);
}

TEST_CASE("binding game: no collisions over 2^20 attempts") {
  Rng rng(64);
  auto rep = game_bind(std::uint64_t{1} << 20, rng);
  CHECK(rep.attempts == (std::uint64_t{1} << 20));
  CHECK(rep.collisions == 0);
}

TEST_CASE("hiding game: first-byte distinguisher has no advantage") {
  Rng rng(65);
  auto rep = game_hide(10000, rng);
  CHECK(rep.samples == 10000);
  CHECK(rep.sigma == doctest::Approx(0.01));
  CHECK(std::abs(rep.advantage) <= 3 * rep.sigma);
  // A constant guess is the baseline.
  Rng rng2(66);
  auto cheat = [](const Commitment&) { return 0; };
  auto rep2 = game_hide(2000, rng2, cheat);
  CHECK(std::abs(rep2.advantage) <= 3 * rep2.sigma);
}

TEST_CASE("commitment bytes are uniform under fresh blinding") {
  Rng rng(67);
  std::vector<Fr> m{Fr::from_u64(1), Fr::from_u64(2)};
  double chi = byte_chi_square(m, 20000, rng);
  // 99th percentile of chi-square with 255 degrees of freedom.
  CHECK(chi < 310.457);
}
