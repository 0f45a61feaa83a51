#include "rlchain/block.hpp"

#include "rlchain/merkle.hpp"

namespace rlchain {

namespace {
void encode_header_prefix(Encoder& enc, const BlockHeader& h) {
  enc.u32(h.version);
  enc.u64(h.height);
  enc.hash(h.prev_hash);
  enc.hash(h.tx_merkle_root);
  enc.u64(h.timestamp);
  enc.key(h.proposer);
}
}  // namespace

Hash256 header_hash(const BlockHeader& header) {
  Encoder enc;
  encode_header_prefix(enc, header);
  enc.sig(header.seal);
  return sha256(enc.bytes());
}

Bytes seal_preimage(const BlockHeader& header, uint64_t chain_id) {
  Encoder enc;
  enc.u64(chain_id);
  encode_header_prefix(enc, header);
  return enc.take();
}

Result<Bytes> encode_block(const Block& block) {
  Encoder enc;
  encode_header_prefix(enc, block.header);
  enc.sig(block.header.seal);
  enc.u32(static_cast<uint32_t>(block.transactions.size()));
  for (const auto& tx : block.transactions) {
    auto bytes = canonical_serialize(tx);
    if (!bytes) return bytes;
    enc.u32(static_cast<uint32_t>(bytes->size()));
    enc.raw(bytes.value());
  }
  return enc.take();
}

Result<Block> decode_block(std::span<const uint8_t> data) {
  Decoder dec(data);
  Block block;
  auto version = dec.u32();
  auto height = dec.u64();
  auto prev = dec.hash();
  auto root = dec.hash();
  auto ts = dec.u64();
  auto proposer = dec.key();
  auto seal = dec.sig();
  if (!version || !height || !prev || !root || !ts || !proposer || !seal)
    return Error{ErrorCode::SERIALIZATION_ERROR, "malformed block header"};
  block.header = {*version, *height, *prev, *root, *ts, *proposer, *seal};
  auto count = dec.u32();
  if (!count) return Error{ErrorCode::SERIALIZATION_ERROR, "missing tx count"};
  for (uint32_t i = 0; i < *count; ++i) {
    auto len = dec.u32();
    if (!len) return Error{ErrorCode::SERIALIZATION_ERROR, "missing tx length"};
    auto raw = dec.raw(*len);
    if (!raw) return Error{ErrorCode::SERIALIZATION_ERROR, "truncated tx"};
    auto tx = deserialize_transaction(*raw);
    if (!tx) return tx.error();
    block.transactions.push_back(std::move(tx.value()));
  }
  if (!dec.done()) return Error{ErrorCode::SERIALIZATION_ERROR, "trailing bytes after block"};
  return block;
}

Hash256 block_tx_root(const Block& block) {
  std::vector<Hash256> leaves;
  leaves.reserve(block.transactions.size());
  for (const auto& tx : block.transactions) {
    auto h = tx_hash(tx);
    if (!h) return Hash256{};  // unserializable tx cannot appear in a sealed block
    leaves.push_back(h.value());
  }
  return merkle_root(leaves);
}

}  // namespace rlchain
