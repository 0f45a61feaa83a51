#pragma once

#include <cstdint>
#include <vector>

#include "rlchain/errors.hpp"
#include "rlchain/transaction.hpp"

namespace rlchain {

struct BlockHeader {
  uint32_t version = 1;
  uint64_t height = 0;
  Hash256 prev_hash;
  Hash256 tx_merkle_root;
  uint64_t timestamp = 0;  // proposer-asserted Unix seconds
  PublicKeyId proposer;
  Signature seal{};  // proposer signature over chain_id + preceding fields

  bool operator==(const BlockHeader&) const = default;
};

struct Block {
  BlockHeader header;
  std::vector<Transaction> transactions;

  bool operator==(const Block&) const = default;
};

// Header hash includes the seal; prev_hash links are computed over it.
Hash256 header_hash(const BlockHeader& header);

Bytes seal_preimage(const BlockHeader& header, uint64_t chain_id);

Result<Bytes> encode_block(const Block& block);
Result<Block> decode_block(std::span<const uint8_t> data);

Hash256 block_tx_root(const Block& block);

}  // namespace rlchain
