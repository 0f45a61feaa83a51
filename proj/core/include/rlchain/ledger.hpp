#pragma once

#include <map>
#include <vector>

#include "rlchain/block.hpp"
#include "rlchain/genesis.hpp"
#include "rlchain/registry.hpp"

namespace rlchain {

struct SealResult;

// Committed state materialized by applying the chain from genesis.
class LedgerState {
 public:
  LedgerState() = default;
  explicit LedgerState(const GenesisConfig& genesis);

  const GenesisConfig& genesis() const { return genesis_; }
  const Registry& registry() const { return registry_; }
  uint64_t height() const { return height_; }
  const Hash256& tip_hash() const { return tip_hash_; }
  uint64_t tip_timestamp() const { return tip_timestamp_; }

  uint64_t next_nonce(const PublicKeyId& sender) const;

  // Full admission check against committed state: decode-level schema,
  // signature under this chain id, nonce monotonicity, then contract rules.
  Status validate_transaction(const Transaction& tx) const;

  // Validate and mutate. Called only from the commit path.
  Status apply_transaction(const Transaction& tx, uint64_t block_height);

  // Verifies header linkage and seal, then applies every contained
  // transaction; any invalid transaction rejects the whole block (sealed
  // blocks contain only valid transactions by construction).
  Status apply_block(const Block& block);

  Hash256 state_digest() const;

 private:
  friend Result<SealResult> seal_block(const std::vector<Transaction>&, LedgerState&,
                                       const Keypair&, uint64_t, bool);
  GenesisConfig genesis_;
  Registry registry_;
  std::map<std::array<uint8_t, 32>, uint64_t> last_nonce_;  // last committed, per sender
  uint64_t height_ = 0;
  Hash256 tip_hash_;
  uint64_t tip_timestamp_ = 0;
};

struct SealResult {
  Block block;
  std::vector<std::pair<Hash256, Error>> rejected;  // tx hash -> reason
};

// Proof-of-authority sealing. Invalid transactions are skipped, not
// block-aborting. Returns NOT_YOUR_TURN when the key is not the round-robin
// proposer for the next height, NO_PROGRESS when there is nothing to seal and
// empty blocks are not permitted.
Result<SealResult> seal_block(const std::vector<Transaction>& pending, LedgerState& state,
                              const Keypair& validator_key, uint64_t timestamp,
                              bool allow_empty = false);

struct BlockCheck {
  uint64_t height = 0;
  bool decode_ok = true;
  bool hash_link_ok = true;
  bool merkle_ok = true;
  bool seal_ok = true;
  bool proposer_ok = true;
  bool timestamp_ok = true;
  bool tx_signatures_ok = true;
  std::vector<std::string> notes;

  bool all_ok() const {
    return decode_ok && hash_link_ok && merkle_ok && seal_ok && proposer_ok && timestamp_ok &&
           tx_signatures_ok;
  }
};

struct ChainReport {
  std::vector<BlockCheck> blocks;
  bool ok = true;
};

// Structural verification of a stored chain: per block, hash linkage, Merkle
// root, seal validity, proposer eligibility (round-robin), timestamp
// monotonicity, and every transaction signature. Failures are report entries,
// never exceptions.
ChainReport verify_chain(const std::vector<Bytes>& raw_blocks, const GenesisConfig& genesis);
ChainReport verify_chain(const std::vector<Block>& chain, const GenesisConfig& genesis);

}  // namespace rlchain
