#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include "hermes/util/bytes.hpp"

namespace hermes {

/// Deterministic SHA-256 counter-mode generator.
///
/// Seeded generators reproduce byte-identical streams on every platform, which is what
/// test-mode setup, proving and simulation rely on. `from_entropy` seeds from the OS.
/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::string_view domain = "hermes-rng");
  static Rng from_entropy();

  /// Independent child stream; the parent advances by one draw.
  Rng fork(std::string_view domain);

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();
  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double unit();

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  Rng() = default;
  void refill();

  Digest key_{};
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = block_.size();
};

}  // namespace hermes
