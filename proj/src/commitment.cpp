#include "hermes/commitment/commitment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

namespace hermes::commitment {

BlindingFactor BlindingFactor::sample(Rng& rng) {
  Bytes raw = rng.bytes(16);
  return {Fr::from_bytes_reduce(raw)};
}

Commitment commit(std::span<const Fr> message, const BlindingFactor& s) {
  std::vector<Fr> input(message.begin(), message.end());
  input.push_back(s.value);
  return {sponge_hash<Fr>(input)};
}

bool verify_commitment(const Commitment& c, std::span<const Fr> message, const BlindingFactor& s) {
  return commit(message, s) == c;
}

Committed commit_fresh(std::vector<Fr> message, Rng& rng) {
  BlindingFactor s = BlindingFactor::sample(rng);
  Commitment c = commit(message, s);
  return {c, {std::move(message), s}};
}

namespace {

std::uint64_t truncated(const Fr& v, unsigned bits) {
  std::uint64_t low = v.to_int().limbs[0];
  return bits == 0 || bits >= 64 ? low : low & ((std::uint64_t{1} << bits) - 1);
}

}  // namespace

CollisionReport game_collision(std::uint64_t attempts, unsigned truncate_bits, Rng& rng) {
  CollisionReport rep;
  rep.output_bits = truncate_bits == 0 ? static_cast<unsigned>(Fr::kBits) : truncate_bits;
  // Full-width comparisons use the whole element; truncated ones the low bits.
  std::unordered_map<std::string, Fr> seen;
  seen.reserve(attempts);
  for (std::uint64_t i = 0; i < attempts; ++i) {
    Fr x = Fr::random(rng);
    std::array<Fr, 1> in{x};
    Fr h = sponge_hash<Fr>(in);
    std::string key;
    if (truncate_bits == 0) {
      Bytes b = h.to_bytes();
      key.assign(b.begin(), b.end());
    } else {
      key = std::to_string(truncated(h, truncate_bits));
    }
    auto [it, fresh] = seen.emplace(std::move(key), x);
    ++rep.attempts;
    if (!fresh && !(it->second == x)) {
      ++rep.collisions;
      if (!rep.first_collision_at) rep.first_collision_at = i + 1;
    }
  }
  return rep;
}

CollisionReport game_bind(std::uint64_t attempts, Rng& rng, std::size_t message_len) {
  CollisionReport rep;
  rep.output_bits = static_cast<unsigned>(Fr::kBits);
  struct Entry {
    Bytes c;
    std::uint64_t index;
  };
  std::vector<Entry> entries;
  entries.reserve(attempts);
  std::vector<std::vector<Fr>> messages(attempts);
  std::vector<BlindingFactor> blinds(attempts);
  for (std::uint64_t i = 0; i < attempts; ++i) {
    messages[i].resize(message_len);
    for (auto& m : messages[i]) m = Fr::random(rng);
    blinds[i] = BlindingFactor::sample(rng);
    entries.push_back({commit(messages[i], blinds[i]).c.to_bytes(), i});
    ++rep.attempts;
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.c < b.c; });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].c != entries[k - 1].c) continue;
    auto i = entries[k - 1].index, j = entries[k].index;
    if (messages[i] == messages[j] && blinds[i] == blinds[j]) continue;  // same opening drawn twice
    ++rep.collisions;
    std::uint64_t at = std::max(i, j) + 1;
    if (!rep.first_collision_at || at < *rep.first_collision_at) rep.first_collision_at = at;
  }
  return rep;
}

int first_byte_distinguisher(const Commitment& c) { return c.c.to_bytes()[0] & 1; }

HidingReport game_hide(std::uint64_t samples, Rng& rng, const Distinguisher& d) {
  const std::vector<Fr> m0{Fr::zero()};
  const std::vector<Fr> m1{Fr::one()};
  HidingReport rep;
  for (std::uint64_t i = 0; i < samples; ++i) {
    int bit = static_cast<int>(rng.uniform(2));
    Commitment c = commit(bit ? m1 : m0, BlindingFactor::sample(rng));
    rep.correct += d(c) == bit;
    ++rep.samples;
  }
  if (rep.samples > 0) {
    double n = static_cast<double>(rep.samples);
    rep.advantage = 2.0 * static_cast<double>(rep.correct) / n - 1.0;
    rep.sigma = 1.0 / std::sqrt(n);
  }
  return rep;
}

double byte_chi_square(std::span<const Fr> message, std::uint64_t samples, Rng& rng) {
  std::array<std::uint64_t, 256> counts{};
  for (std::uint64_t i = 0; i < samples; ++i) ++counts[commit(message, BlindingFactor::sample(rng)).c.to_bytes()[0]];
  const double expected = static_cast<double>(samples) / 256.0;
  double chi = 0;
  for (auto k : counts) {
    double diff = static_cast<double>(k) - expected;
    chi += diff * diff / expected;
  }
  return chi;
}

}  // namespace hermes::commitment
