#pragma once

#include "hermes/util/bytes.hpp"

namespace hermes {

/// SHA-256 of a byte string.
Digest sha256(ByteSpan data);

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(ByteSpan data);
  Sha256& update(std::string_view text);
  Digest finish();

 private:
  void* ctx_;
};

}  // namespace hermes
