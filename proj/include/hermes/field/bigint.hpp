#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace hermes::field {

using u128 = unsigned __int128;

/// Fixed-width unsigned integer, little-endian 64-bit limbs.
template <std::size_t N>
struct BigInt {
  std::array<std::uint64_t, N> limbs{};

  constexpr BigInt() = default;
  constexpr explicit BigInt(std::uint64_t v) { limbs[0] = v; }
  constexpr explicit BigInt(const std::array<std::uint64_t, N>& l) : limbs(l) {}

  constexpr bool is_zero() const {
    for (auto l : limbs)
      if (l != 0) return false;
    return true;
  }

  constexpr bool bit(std::size_t i) const {
    return i < 64 * N && ((limbs[i / 64] >> (i % 64)) & 1u) != 0;
  }

  constexpr std::size_t num_bits() const {
    for (std::size_t i = N; i-- > 0;) {
      if (limbs[i] != 0) return 64 * i + (64 - static_cast<std::size_t>(__builtin_clzll(limbs[i])));
    }
    return 0;
  }

  constexpr std::strong_ordering operator<=>(const BigInt& o) const {
    for (std::size_t i = N; i-- > 0;) {
      if (limbs[i] != o.limbs[i]) return limbs[i] <=> o.limbs[i];
    }
    return std::strong_ordering::equal;
  }
  constexpr bool operator==(const BigInt& o) const = default;

  /// this += o, returns the carry out.
  constexpr std::uint64_t add_in_place(const BigInt& o) {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < N; ++i) {
      u128 s = static_cast<u128>(limbs[i]) + o.limbs[i] + carry;
      limbs[i] = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
    return carry;
  }

  /// this -= o, returns the borrow out.
  constexpr std::uint64_t sub_in_place(const BigInt& o) {
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < N; ++i) {
      u128 d = static_cast<u128>(limbs[i]) - o.limbs[i] - borrow;
      limbs[i] = static_cast<std::uint64_t>(d);
      borrow = static_cast<std::uint64_t>(d >> 64) & 1u;
    }
    return borrow;
  }

  constexpr void shr1() {
    for (std::size_t i = 0; i < N; ++i) {
      limbs[i] >>= 1;
      if (i + 1 < N) limbs[i] |= limbs[i + 1] << 63;
    }
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = N; i-- > 0;) {
      for (int s = 60; s >= 0; s -= 4) out.push_back(kDigits[(limbs[i] >> s) & 0xf]);
    }
    auto first = out.find_first_not_of('0');
    return first == std::string::npos ? "0" : out.substr(first);
  }

  std::string to_decimal() const {
    BigInt t = *this;
    std::string out;
    while (!t.is_zero()) {
      u128 rem = 0;
      for (std::size_t i = N; i-- > 0;) {
        u128 cur = (rem << 64) | t.limbs[i];
        t.limbs[i] = static_cast<std::uint64_t>(cur / 10);
        rem = cur % 10;
      }
      out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(rem)));
    }
    return out.empty() ? "0" : out;
  }
};

}  // namespace hermes::field
