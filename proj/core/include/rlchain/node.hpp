#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "rlchain/audit.hpp"
#include "rlchain/blockstore.hpp"
#include "rlchain/cas.hpp"
#include "rlchain/ledger.hpp"
#include "rlchain/toc.hpp"

namespace rlchain {

struct NodeConfig {
  std::filesystem::path data_dir;
  GenesisConfig genesis;
  std::optional<Keypair> validator_key;  // absent for query-only nodes
  std::chrono::milliseconds seal_interval{500};
  bool allow_empty_blocks = false;
};

struct SubmitOutcome {
  bool accepted = false;
  Hash256 tx_hash;
  std::string reason;
};

// Preimage for the signed TOC append request; ownership of a TOC is proven by
// a signature under the stakeholder key.
Bytes toc_append_preimage(const PublicKeyId& owner, uint64_t index, const std::string& key,
                          const Hash256& content_hash);

// Single-process node: block persistence, transaction admission, the sealing
// scheduler, and hosting of the off-chain stores. State recovery replays the
// block log from genesis on startup. Data dir layout: blocks.log, blocks.idx,
// cas/, toc/<stakeholder-hex>.log.
class Node {
 public:
  // Refuses to start if the persisted chain fails verification; a truncated
  // final log record is recovered to the last complete block.
  static Result<std::unique_ptr<Node>> open(NodeConfig config);
  ~Node();

  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  void start_sealing();
  // Drains the pending queue into a final block, then stops the sealer.
  void stop();

  SubmitOutcome submit(const Transaction& tx);
  Result<SubmitOutcome> submit_hex(const std::string& tx_hex);
  // Seals one block from the pending queue; returns true if a block was
  // committed. Exposed for tests and deterministic drivers.
  bool seal_once();

  uint64_t height() const;
  uint64_t chain_id() const { return config_.genesis.chain_id; }
  const GenesisConfig& genesis() const { return config_.genesis; }
  Hash256 state_digest() const;
  Hash256 tip_hash() const;

  Result<Bytes> get_block_bytes(uint64_t height) const;
  Result<std::vector<ProcessEvent>> get_device_history(const std::string& serial) const;
  Result<DeviceRecord> get_device(const std::string& serial) const;
  Result<StakeholderStats> get_stakeholder_stats(const PublicKeyId& id) const;
  uint64_t next_nonce_for(const PublicKeyId& sender) const;
  // Commit height if committed; otherwise the rejection reason if known.
  std::optional<uint64_t> tx_commit_height(const Hash256& hash) const;
  std::optional<std::string> tx_rejection(const Hash256& hash) const;

  ChainReport verify() const;
  Result<CustodyReport> device_compliance(const std::string& serial) const;
  SystemReport full_audit() const;

  Result<Hash256> put_record(const Bytes& bytes);
  Result<Bytes> get_record(const Hash256& address) const;
  Result<TocEntry> toc_append(const PublicKeyId& owner, const std::string& key,
                              const Hash256& content_hash, uint64_t index, const Signature& sig);
  Result<std::vector<TocEntry>> get_toc(const PublicKeyId& owner) const;

  const std::filesystem::path& toc_dir() const { return toc_dir_; }
  const ContentStore& cas() const { return *cas_; }

 private:
  explicit Node(NodeConfig config);
  void sealer_loop();

  NodeConfig config_;
  std::filesystem::path toc_dir_;
  std::unique_ptr<ContentStore> cas_;

  mutable std::mutex mu_;
  std::optional<BlockStore> store_;
  LedgerState state_;
  std::deque<Transaction> pending_;
  std::map<std::array<uint8_t, 32>, std::vector<uint64_t>> pending_nonces_;
  std::map<std::array<uint8_t, 32>, uint64_t> committed_txs_;   // tx hash -> height
  std::map<std::array<uint8_t, 32>, std::string> rejected_txs_;  // tx hash -> reason

  std::thread sealer_;
  std::condition_variable cv_;
  bool stopping_ = false;
  bool sealing_started_ = false;
};

}  // namespace rlchain
