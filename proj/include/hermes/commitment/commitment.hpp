#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hermes/commitment/sponge.hpp"
#include "hermes/util/rng.hpp"

namespace hermes::commitment {

/// s_sec: 128 random bits, reduced into the active field.
struct BlindingFactor {
  Fr value;
  static BlindingFactor sample(Rng& rng);
  bool operator==(const BlindingFactor&) const = default;
};

struct Commitment {
  Fr c;
  bool operator==(const Commitment&) const = default;
};

/// Everything needed to open a commitment.
struct Opening {
  std::vector<Fr> message;
  BlindingFactor blinding;
};

/// c = sponge_hash(m || s_sec).
Commitment commit(std::span<const Fr> message, const BlindingFactor& s);
/// Recomputes and compares.
bool verify_commitment(const Commitment& c, std::span<const Fr> message, const BlindingFactor& s);
inline bool verify_commitment(const Commitment& c, const Opening& o) {
  return verify_commitment(c, o.message, o.blinding);
}

/// Commits and keeps the opening alongside.
struct Committed {
  Commitment commitment;
  Opening opening;
};
Committed commit_fresh(std::vector<Fr> message, Rng& rng);

// Security games run as statistical harnesses.

struct CollisionReport {
  std::uint64_t attempts = 0;
  std::uint64_t collisions = 0;
  std::optional<std::uint64_t> first_collision_at;  // attempt index (1-based)
  unsigned output_bits = 0;
};

/// Birthday search on sponge_hash([x]) truncated to `truncate_bits` (0 = full width).
CollisionReport game_collision(std::uint64_t attempts, unsigned truncate_bits, Rng& rng);

/// Random (m, s_sec) pairs of length `message_len`; counts distinct openings sharing a commitment.
CollisionReport game_bind(std::uint64_t attempts, Rng& rng, std::size_t message_len = 1);

struct HidingReport {
  std::uint64_t samples = 0;
  std::uint64_t correct = 0;
  double advantage = 0;  // 2 Pr[guess = b] - 1
  double sigma = 0;      // standard error of the advantage under the null
};

/// Distinguisher: maps a commitment to a guess bit.
using Distinguisher = std::function<int(const Commitment&)>;
/// Parity of the lowest byte of c.
int first_byte_distinguisher(const Commitment& c);

/// Adversary fixes m0 != m1; each sample commits to m_b under fresh blinding with hidden b.
HidingReport game_hide(std::uint64_t samples, Rng& rng, const Distinguisher& d = first_byte_distinguisher);

/// Chi-square statistic of the lowest commitment byte over fixed m and random s_sec.
double byte_chi_square(std::span<const Fr> message, std::uint64_t samples, Rng& rng);

}  // namespace hermes::commitment
