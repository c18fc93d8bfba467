#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "hermes/field/fp.hpp"
#include "hermes/util/bytes.hpp"

namespace hermes::field {

/// Datatype tags selecting a canonical serialization rule.
enum class DTypeTag : std::uint8_t {
  kCtx = 1,
  kR1cs = 2,
  kVk = 3,
  kCert = 4,
  kProof = 5,
  kCommit = 6,
  kTs = 7,
  kNonce = 8,
};

inline constexpr std::array<DTypeTag, 8> kAllTags = {DTypeTag::kCtx,   DTypeTag::kR1cs,   DTypeTag::kVk,
                                                     DTypeTag::kCert,  DTypeTag::kProof,  DTypeTag::kCommit,
                                                     DTypeTag::kTs,    DTypeTag::kNonce};

inline constexpr std::size_t kTimestampWidth = 8;
inline constexpr std::size_t kNonceWidth = 16;
inline constexpr std::size_t kContextWidth = 4;

std::string_view tag_name(DTypeTag tag);
DTypeTag tag_from_byte(std::uint8_t b);

/// What kind of value a tag serializes.
enum class ValueKind { kBytes, kInteger, kField };

constexpr ValueKind kind_of(DTypeTag tag) {
  switch (tag) {
    case DTypeTag::kCtx:
    case DTypeTag::kTs:
      return ValueKind::kInteger;
    case DTypeTag::kCommit:
      return ValueKind::kField;
    default:
      return ValueKind::kBytes;
  }
}

/// A value accepted by encode. Group elements, keys, proofs and certificates enter as the
/// byte strings produced by their own serializers.
template <typename F>
using Encodable = std::variant<Bytes, std::uint64_t, F>;

/// Canonical little-endian encoding. Integers are fixed width (CTX 4 bytes, TS 8 bytes),
/// field elements use F::kByteWidth bytes, NONCE is exactly 16 raw bytes, and the
/// remaining tags carry opaque bytes unchanged.
template <typename F>
Bytes encode(const Encodable<F>& value, DTypeTag tag) {
  const ValueKind kind = kind_of(tag);
  Bytes out;
  switch (kind) {
    case ValueKind::kInteger: {
      const auto* v = std::get_if<std::uint64_t>(&value);
      if (v == nullptr) throw UsageError(std::string("tag ") + std::string(tag_name(tag)) + " expects an integer");
      const std::size_t width = tag == DTypeTag::kCtx ? kContextWidth : kTimestampWidth;
      if (width < 8 && (*v >> (8 * width)) != 0) throw UsageError("integer does not fit the CTX width");
      put_le(out, *v, width);
      return out;
    }
    case ValueKind::kField: {
      const auto* v = std::get_if<F>(&value);
      if (v == nullptr) throw UsageError(std::string("tag ") + std::string(tag_name(tag)) + " expects a field element");
      v->write_bytes(out);
      return out;
    }
    case ValueKind::kBytes: {
      const auto* v = std::get_if<Bytes>(&value);
      if (v == nullptr) throw UsageError(std::string("tag ") + std::string(tag_name(tag)) + " expects bytes");
      if (tag == DTypeTag::kNonce && v->size() != kNonceWidth) throw UsageError("NONCE must be 16 bytes");
      return *v;
    }
  }
  return out;
}

/// Exact inverse of encode; malformed lengths and out-of-range field values raise ParseError.
template <typename F>
Encodable<F> decode(ByteSpan data, DTypeTag tag) {
  switch (kind_of(tag)) {
    case ValueKind::kInteger: {
      const std::size_t width = tag == DTypeTag::kCtx ? kContextWidth : kTimestampWidth;
      if (data.size() != width) {
        throw ParseError(std::string(tag_name(tag)) + " needs " + std::to_string(width) + " bytes, got " +
                         std::to_string(data.size()));
      }
      ByteReader r(data);
      return r.uint(width);
    }
    case ValueKind::kField:
      return F::from_bytes(data);
    case ValueKind::kBytes:
      if (tag == DTypeTag::kNonce && data.size() != kNonceWidth) {
        throw ParseError("NONCE needs 16 bytes, got " + std::to_string(data.size()));
      }
      return Bytes(data.begin(), data.end());
  }
  throw ParseError("unknown tag");
}

}  // namespace hermes::field
