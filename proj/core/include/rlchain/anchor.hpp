#pragma once

#include <cstdint>

#include "rlchain/hash.hpp"
#include "rlchain/keys.hpp"

namespace rlchain {

// On-chain Merkle commitment to a prefix of a stakeholder's off-chain TOC.
struct TocAnchor {
  PublicKeyId stakeholder;
  uint64_t toc_length = 0;
  Hash256 toc_root;
  uint64_t anchored_at = 0;  // block height

  bool operator==(const TocAnchor&) const = default;
};

}  // namespace rlchain
