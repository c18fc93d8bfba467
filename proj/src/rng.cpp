#include "hermes/util/rng.hpp"

#include <openssl/rand.h>

#include "hermes/util/sha256.hpp"

namespace hermes {

Rng::Rng(std::uint64_t seed, std::string_view domain) {
  Bytes material;
  put_le(material, seed);
  Sha256 h;
  h.update(domain).update(material);
  key_ = h.finish();
}

Rng Rng::from_entropy() {
  Rng rng;
  if (RAND_bytes(rng.key_.data(), static_cast<int>(rng.key_.size())) != 1) {
    throw Error("OS entropy unavailable");
  }
  return rng;
}

Rng Rng::fork(std::string_view domain) {
  Rng child;
  Bytes material;
  put_le(material, next_u64());
  Sha256 h;
  h.update(key_).update(domain).update(material);
  child.key_ = h.finish();
  return child;
}

void Rng::refill() {
  Bytes ctr;
  put_le(ctr, counter_++);
  Sha256 h;
  h.update(key_).update(ctr);
  block_ = h.finish();
  used_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size()) refill();
    b = block_[used_++];
  }
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> raw{};
  fill(raw);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(raw[i]) << (8 * i);
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw UsageError("uniform bound must be positive");
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

double Rng::unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace hermes
