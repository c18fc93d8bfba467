#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hermes/util/error.hpp"

namespace hermes {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

template <typename T>
void put_le(Bytes& out, T value, std::size_t width = sizeof(T)) {
  for (std::size_t i = 0; i < width; ++i) {
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
  }
}

inline void put_bytes(Bytes& out, ByteSpan data) { out.insert(out.end(), data.begin(), data.end()); }

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

/// Sequential little-endian reader over a byte buffer; every read is bounds-checked.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  ByteSpan take(std::size_t n) {
    if (remaining() < n) {
      throw ParseError("truncated buffer: need " + std::to_string(n) + " bytes, have " +
                       std::to_string(remaining()));
    }
    ByteSpan out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint64_t uint(std::size_t width) {
    ByteSpan raw = take(width);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(raw[i]) << (8 * i);
    return v;
  }

  std::uint8_t u8() { return static_cast<std::uint8_t>(uint(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  std::uint64_t u64() { return uint(8); }

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return remaining() == 0; }

  void expect_done() const {
    if (!done()) throw ParseError("trailing bytes: " + std::to_string(remaining()));
  }

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

Bytes read_file(const std::string& path);
void write_file(const std::string& path, ByteSpan data);

}  // namespace hermes
