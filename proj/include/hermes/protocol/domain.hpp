#pragma once

#include <cstdint>

#include "hermes/util/error.hpp"

namespace hermes::protocol {

enum class OpId : std::uint8_t { kCommit = 0x01, kSign = 0x02 };

/// Four-byte context tag [App][Op][Counter hi][Counter lo].
struct DomainSeparator {
  std::uint8_t app_id = 0;
  OpId op = OpId::kCommit;
  std::uint16_t counter = 0;

  /// The packed big-endian layout read as an integer.
  constexpr std::uint32_t value() const {
    return (std::uint32_t{app_id} << 24) | (std::uint32_t{static_cast<std::uint8_t>(op)} << 16) | counter;
  }
  static DomainSeparator from_value(std::uint32_t v);

  bool operator==(const DomainSeparator&) const = default;
};

/// UsageError unless op_id is 0x01 (commit) or 0x02 (sign).
inline DomainSeparator build_domain_separator(std::uint8_t app_id, std::uint8_t op_id, std::uint16_t counter) {
  if (op_id != 0x01 && op_id != 0x02) throw UsageError("op_id must be 0x01 (commit) or 0x02 (sign)");
  return {app_id, static_cast<OpId>(op_id), counter};
}

inline DomainSeparator DomainSeparator::from_value(std::uint32_t v) {
  return build_domain_separator(static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                                static_cast<std::uint16_t>(v));
}

inline constexpr std::uint8_t kAppPerception = 0x00;
inline constexpr std::uint8_t kAppAudit = 0x01;

inline DomainSeparator commit_tag(std::uint8_t app) { return {app, OpId::kCommit, 0}; }
inline DomainSeparator sign_tag(std::uint8_t app) { return {app, OpId::kSign, 0}; }

}  // namespace hermes::protocol
