#include "hermes/field/encoding.hpp"

namespace hermes::field {

std::string_view tag_name(DTypeTag tag) {
  switch (tag) {
    case DTypeTag::kCtx:
      return "CTX";
    case DTypeTag::kR1cs:
      return "R1CS";
    case DTypeTag::kVk:
      return "VK";
    case DTypeTag::kCert:
      return "CERT";
    case DTypeTag::kProof:
      return "PROOF";
    case DTypeTag::kCommit:
      return "COMMIT";
    case DTypeTag::kTs:
      return "TS";
    case DTypeTag::kNonce:
      return "NONCE";
  }
  return "?";
}

DTypeTag tag_from_byte(std::uint8_t b) {
  if (b < 1 || b > 8) throw ParseError("unknown dtype tag " + std::to_string(b));
  return static_cast<DTypeTag>(b);
}

}  // namespace hermes::field
