#pragma once

#include "hermes/field/fp.hpp"

namespace hermes::field {

/// "test" profile: 61-bit scalar field of the toy pairing curve.
/// q = 0x1ffffd6b00000001 = 536870251 * 2^32 + 1, q = 2 (mod 3).
struct TestFrParams {
  static constexpr std::size_t kLimbs = 1;
  static constexpr BigInt<1> kModulus{std::array<std::uint64_t, 1>{0x1ffffd6b00000001ULL}};
  static constexpr std::uint64_t kGenerator = 3;
  static constexpr std::uint32_t kTwoAdicity = 32;
  static constexpr const char* kName = "test-61";
  static constexpr std::uint8_t kProfileId = 0x01;
};

/// "standard" profile: the 254-bit BN254 scalar field.
struct StandardFrParams {
  static constexpr std::size_t kLimbs = 4;
  static constexpr BigInt<4> kModulus{std::array<std::uint64_t, 4>{
      0x43e1f593f0000001ULL, 0x2833e84879b97091ULL, 0xb85045b68181585dULL, 0x30644e72e131a029ULL}};
  static constexpr std::uint64_t kGenerator = 5;
  static constexpr std::uint32_t kTwoAdicity = 28;
  static constexpr const char* kName = "standard-254";
  static constexpr std::uint8_t kProfileId = 0x02;
};

/// Base field of the toy curve: p = 4q - 1, p = 3 (mod 4).
struct ToyFqParams {
  static constexpr std::size_t kLimbs = 1;
  static constexpr BigInt<1> kModulus{std::array<std::uint64_t, 1>{0x7ffff5ac00000003ULL}};
  static constexpr std::uint64_t kGenerator = 2;
  static constexpr std::uint32_t kTwoAdicity = 1;
  static constexpr const char* kName = "toy-base-63";
  static constexpr std::uint8_t kProfileId = 0x81;
};

using TestFr = Fp<TestFrParams>;
using StandardFr = Fp<StandardFrParams>;
using ToyFq = Fp<ToyFqParams>;

}  // namespace hermes::field

namespace hermes {

/// Scalar field every circuit, commitment and proof in the pipeline is built over.
using Fr = field::TestFr;

}  // namespace hermes
