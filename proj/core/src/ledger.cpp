#include "rlchain/ledger.hpp"

#include <algorithm>

#include "rlchain/merkle.hpp"

namespace rlchain {

namespace {
// Fixed-width header prefix + seal; links are computed over these bytes even
// when the transaction section fails to decode.
constexpr size_t kHeaderBytes = 4 + 8 + 32 + 32 + 8 + 32 + 64;
}  // namespace

LedgerState::LedgerState(const GenesisConfig& genesis)
    : genesis_(genesis), registry_(genesis.registrars) {
  tip_hash_ = header_hash(genesis.genesis_block().header);
}

uint64_t LedgerState::next_nonce(const PublicKeyId& sender) const {
  auto it = last_nonce_.find(sender.bytes);
  return it == last_nonce_.end() ? 0 : it->second + 1;
}

Status LedgerState::validate_transaction(const Transaction& tx) const {
  if (!verify_transaction_signature(tx, genesis_.chain_id))
    return Error{ErrorCode::BAD_SIGNATURE, "signature does not verify for this chain"};
  auto it = last_nonce_.find(tx.sender.bytes);
  if (it != last_nonce_.end() && tx.nonce <= it->second)
    return Error{ErrorCode::BAD_NONCE, "nonce does not exceed last committed nonce"};
  return std::visit(
      [this, &tx](const auto& p) -> Status {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RegisterStakeholderPayload>)
          return registry_.check_register_stakeholder(tx.sender, p);
        else if constexpr (std::is_same_v<P, RegisterDevicePayload>)
          return registry_.check_register_device(tx.sender, p);
        else if constexpr (std::is_same_v<P, RecordEventPayload>)
          return registry_.check_event(tx.sender, p);
        else if constexpr (std::is_same_v<P, ClassifyDevicePayload>)
          return registry_.check_classify(tx.sender, p);
        else
          return registry_.check_anchor(tx.sender, p);
      },
      tx.payload);
}

Status LedgerState::apply_transaction(const Transaction& tx, uint64_t block_height) {
  auto status = validate_transaction(tx);
  if (!status) return status;
  status = std::visit(
      [this, &tx, block_height](const auto& p) -> Status {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RegisterStakeholderPayload>)
          return registry_.register_stakeholder(tx.sender, p, block_height);
        else if constexpr (std::is_same_v<P, RegisterDevicePayload>)
          return registry_.register_device(tx.sender, p, block_height);
        else if constexpr (std::is_same_v<P, RecordEventPayload>)
          return registry_.record_event(tx.sender, p, block_height);
        else if constexpr (std::is_same_v<P, ClassifyDevicePayload>)
          return registry_.classify_device(tx.sender, p, block_height);
        else
          return registry_.apply_anchor(tx.sender, p, block_height);
      },
      tx.payload);
  if (!status) return status;
  last_nonce_[tx.sender.bytes] = tx.nonce;
  return ok_status();
}

Status LedgerState::apply_block(const Block& block) {
  const BlockHeader& h = block.header;
  if (h.height != height_ + 1)
    return Error{ErrorCode::INVALID_TRANSITION, "block height does not extend the tip"};
  if (h.prev_hash != tip_hash_)
    return Error{ErrorCode::INTEGRITY_FAILURE, "prev_hash does not match the tip"};
  if (h.timestamp < tip_timestamp_)
    return Error{ErrorCode::INVALID_TRANSITION, "timestamp moves backwards"};
  if (genesis_.expected_proposer(h.height) != h.proposer)
    return Error{ErrorCode::PERMISSION_DENIED, "proposer is not eligible at this height"};
  auto preimage = seal_preimage(h, genesis_.chain_id);
  if (!verify(h.proposer, preimage, h.seal))
    return Error{ErrorCode::BAD_SIGNATURE, "block seal does not verify"};
  if (block_tx_root(block) != h.tx_merkle_root)
    return Error{ErrorCode::INTEGRITY_FAILURE, "tx merkle root mismatch"};

  LedgerState next = *this;
  for (const auto& tx : block.transactions) {
    auto status = next.apply_transaction(tx, h.height);
    if (!status) return status;
  }
  next.height_ = h.height;
  next.tip_hash_ = header_hash(h);
  next.tip_timestamp_ = h.timestamp;
  *this = std::move(next);
  return ok_status();
}

Hash256 LedgerState::state_digest() const {
  Encoder enc;
  enc.hash(registry_.state_digest());
  enc.u64(last_nonce_.size());
  for (const auto& [sender, nonce] : last_nonce_) {
    enc.raw(sender);
    enc.u64(nonce);
  }
  enc.u64(height_);
  enc.hash(tip_hash_);
  return sha256(enc.bytes());
}

Result<SealResult> seal_block(const std::vector<Transaction>& pending, LedgerState& state,
                              const Keypair& validator_key, uint64_t timestamp,
                              bool allow_empty) {
  uint64_t next_height = state.height_ + 1;
  if (!state.genesis_.is_validator(validator_key.pub))
    return Error{ErrorCode::PERMISSION_DENIED, "key is not a genesis validator"};
  if (state.genesis_.expected_proposer(next_height) != validator_key.pub)
    return Error{ErrorCode::NOT_YOUR_TURN, "not this validator's turn"};

  LedgerState working = state;
  SealResult result;
  for (const auto& tx : pending) {
    auto status = working.apply_transaction(tx, next_height);
    if (status) {
      result.block.transactions.push_back(tx);
    } else {
      auto h = tx_hash(tx);
      result.rejected.emplace_back(h ? h.value() : Hash256{}, status.error());
    }
  }
  if (result.block.transactions.empty() && !allow_empty)
    return Error{ErrorCode::NO_PROGRESS, "nothing to seal"};

  BlockHeader& h = result.block.header;
  h.version = 1;
  h.height = next_height;
  h.prev_hash = state.tip_hash_;
  h.tx_merkle_root = block_tx_root(result.block);
  h.timestamp = std::max(timestamp, state.tip_timestamp_);
  h.proposer = validator_key.pub;
  h.seal = sign(validator_key, seal_preimage(h, state.genesis_.chain_id));

  working.height_ = next_height;
  working.tip_hash_ = header_hash(h);
  working.tip_timestamp_ = h.timestamp;
  state = std::move(working);
  return result;
}

namespace {

ChainReport verify_raw_chain(const std::vector<Bytes>& raw_blocks, const GenesisConfig& genesis) {
  ChainReport report;
  Hash256 prev_link;
  uint64_t prev_ts = 0;
  auto expected_genesis = encode_block(genesis.genesis_block());

  for (size_t i = 0; i < raw_blocks.size(); ++i) {
    const Bytes& raw = raw_blocks[i];
    BlockCheck check;
    check.height = i;

    if (i == 0) {
      if (!expected_genesis || raw != expected_genesis.value()) {
        check.decode_ok = false;
        check.notes.push_back("stored genesis does not match the genesis config");
      }
      prev_link = raw.size() >= kHeaderBytes
                      ? sha256(std::span<const uint8_t>(raw.data(), kHeaderBytes))
                      : Hash256{};
      report.blocks.push_back(check);
      continue;
    }

    auto decoded = decode_block(raw);
    if (!decoded) {
      check.decode_ok = false;
      check.notes.push_back(decoded.error().detail);
    }

    // Link hash over the fixed-width header bytes, available even when the
    // transaction section is corrupt.
    Hash256 link = raw.size() >= kHeaderBytes
                       ? sha256(std::span<const uint8_t>(raw.data(), kHeaderBytes))
                       : Hash256{};

    if (decoded) {
      const Block& block = decoded.value();
      const BlockHeader& h = block.header;
      if (h.height != i) {
        check.hash_link_ok = false;
        check.notes.push_back("stored height does not match position");
      }
      if (h.prev_hash != prev_link) {
        check.hash_link_ok = false;
        check.notes.push_back("prev_hash does not match previous header hash");
      }
      if (h.timestamp < prev_ts) {
        check.timestamp_ok = false;
        check.notes.push_back("timestamp moves backwards");
      }
      if (genesis.expected_proposer(i) != h.proposer || !genesis.is_validator(h.proposer)) {
        check.proposer_ok = false;
        check.notes.push_back("proposer is not the eligible validator for this height");
      }
      if (!verify(h.proposer, seal_preimage(h, genesis.chain_id), h.seal)) {
        check.seal_ok = false;
        check.notes.push_back("seal signature does not verify");
      }
      if (block_tx_root(block) != h.tx_merkle_root) {
        check.merkle_ok = false;
        check.notes.push_back("tx merkle root mismatch");
      }
      for (size_t t = 0; t < block.transactions.size(); ++t) {
        if (!verify_transaction_signature(block.transactions[t], genesis.chain_id)) {
          check.tx_signatures_ok = false;
          check.notes.push_back("invalid signature on tx " + std::to_string(t));
        }
      }
      prev_ts = h.timestamp;
    }
    prev_link = link;
    report.blocks.push_back(std::move(check));
  }
  for (const auto& b : report.blocks) report.ok = report.ok && b.all_ok();
  return report;
}

}  // namespace

ChainReport verify_chain(const std::vector<Bytes>& raw_blocks, const GenesisConfig& genesis) {
  return verify_raw_chain(raw_blocks, genesis);
}

ChainReport verify_chain(const std::vector<Block>& chain, const GenesisConfig& genesis) {
  std::vector<Bytes> raw;
  raw.reserve(chain.size());
  for (const auto& block : chain) {
    auto bytes = encode_block(block);
    raw.push_back(bytes ? bytes.value() : Bytes{});
  }
  return verify_raw_chain(raw, genesis);
}

}  // namespace rlchain
