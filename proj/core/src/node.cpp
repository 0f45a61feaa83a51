#include "rlchain/node.hpp"

#include <algorithm>

#include "rlchain/codec.hpp"

namespace rlchain {

Bytes toc_append_preimage(const PublicKeyId& owner, uint64_t index, const std::string& key,
                          const Hash256& content_hash) {
  Encoder enc;
  enc.str("rl-toc-append");
  enc.key(owner);
  enc.u64(index);
  enc.str(key);
  enc.hash(content_hash);
  return enc.take();
}

Node::Node(NodeConfig config) : config_(std::move(config)) {
  toc_dir_ = config_.data_dir / "toc";
  std::filesystem::create_directories(config_.data_dir);
  std::filesystem::create_directories(toc_dir_);
  cas_ = std::make_unique<ContentStore>(config_.data_dir / "cas");
}

Result<std::unique_ptr<Node>> Node::open(NodeConfig config) {
  if (config.genesis.validators.empty())
    return Error{ErrorCode::INVALID_ARGUMENT, "genesis has no validators"};
  if (config.validator_key && !config.genesis.is_validator(config.validator_key->pub))
    return Error{ErrorCode::PERMISSION_DENIED, "validator key is not listed in genesis"};

  std::unique_ptr<Node> node(new Node(std::move(config)));
  auto store = BlockStore::open(node->config_.data_dir / "blocks.log",
                                node->config_.data_dir / "blocks.idx");
  if (!store) return store.error();
  node->store_ = std::move(store.value());

  node->state_ = LedgerState(node->config_.genesis);
  if (node->store_->size() == 0) {
    auto genesis_bytes = encode_block(node->config_.genesis.genesis_block());
    auto status = node->store_->append(genesis_bytes.value());
    if (!status) return status.error();
  } else {
    auto raw = node->store_->read_all();
    if (!raw) return raw.error();
    auto report = verify_chain(raw.value(), node->config_.genesis);
    if (!report.ok) {
      std::string detail = "persisted chain fails verification:";
      for (const auto& b : report.blocks) {
        for (const auto& n : b.notes)
          detail += " [block " + std::to_string(b.height) + "] " + n + ";";
      }
      return Error{ErrorCode::INTEGRITY_FAILURE, detail};
    }
    for (size_t i = 1; i < raw->size(); ++i) {
      auto block = decode_block(raw.value()[i]);
      if (!block) return block.error();
      auto status = node->state_.apply_block(block.value());
      if (!status) return status.error();
      for (const auto& tx : block->transactions) {
        auto h = tx_hash(tx);
        if (h) node->committed_txs_[h->bytes] = block->header.height;
      }
    }
  }
  return node;
}

Node::~Node() { stop(); }

void Node::start_sealing() {
  std::lock_guard lock(mu_);
  if (sealing_started_ || !config_.validator_key) return;
  sealing_started_ = true;
  stopping_ = false;
  sealer_ = std::thread([this] { sealer_loop(); });
}

void Node::stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_ && !sealing_started_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  if (sealer_.joinable()) sealer_.join();
  if (config_.validator_key) seal_once();  // drain the pending queue
  std::lock_guard lock(mu_);
  sealing_started_ = false;
}

void Node::sealer_loop() {
  std::unique_lock lock(mu_);
  while (!stopping_) {
    cv_.wait_for(lock, config_.seal_interval, [this] { return stopping_; });
    if (stopping_) break;
    lock.unlock();
    seal_once();
    lock.lock();
  }
}

SubmitOutcome Node::submit(const Transaction& tx) {
  SubmitOutcome outcome;
  auto h = tx_hash(tx);
  if (!h) {
    outcome.reason = h.error().detail;
    return outcome;
  }
  outcome.tx_hash = h.value();

  std::lock_guard lock(mu_);
  if (!verify_transaction_signature(tx, config_.genesis.chain_id)) {
    outcome.reason = "signature does not verify for this chain";
    rejected_txs_[outcome.tx_hash.bytes] = outcome.reason;
    return outcome;
  }
  uint64_t committed_next = state_.next_nonce(tx.sender);
  auto& pending = pending_nonces_[tx.sender.bytes];
  if (tx.nonce < committed_next ||
      std::find(pending.begin(), pending.end(), tx.nonce) != pending.end()) {
    outcome.reason = "nonce already used or pending";
    rejected_txs_[outcome.tx_hash.bytes] = outcome.reason;
    return outcome;
  }
  pending.push_back(tx.nonce);
  pending_.push_back(tx);
  outcome.accepted = true;
  return outcome;
}

Result<SubmitOutcome> Node::submit_hex(const std::string& tx_hex) {
  auto raw = from_hex(tx_hex);
  if (!raw) return Error{ErrorCode::SERIALIZATION_ERROR, "malformed hex"};
  auto tx = deserialize_transaction(*raw);
  if (!tx) return tx.error();
  return submit(tx.value());
}

bool Node::seal_once() {
  if (!config_.validator_key) return false;
  std::lock_guard lock(mu_);
  if (pending_.empty() && !config_.allow_empty_blocks) return false;

  std::vector<Transaction> batch(pending_.begin(), pending_.end());
  uint64_t now = static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
  auto sealed =
      seal_block(batch, state_, *config_.validator_key, now, config_.allow_empty_blocks);
  if (!sealed) {
    // NO_PROGRESS with a non-empty queue means every pending transaction was
    // contract-invalid; record the reasons and drop them so submitters see
    // the rejection instead of waiting forever.
    if (sealed.error().code == ErrorCode::NO_PROGRESS && !pending_.empty()) {
      for (const auto& tx : pending_) {
        auto hash = tx_hash(tx);
        auto why = state_.validate_transaction(tx);
        if (hash && !why)
          rejected_txs_[hash->bytes] = std::string(error_name(why.error().code)) +
                                       (why.error().detail.empty() ? ""
                                                                   : ": " + why.error().detail);
      }
      pending_.clear();
      pending_nonces_.clear();
    }
    return false;  // not our turn, or nothing to seal
  }

  pending_.clear();
  pending_nonces_.clear();
  auto bytes = encode_block(sealed->block);
  if (!bytes) return false;
  store_->append(bytes.value());
  uint64_t h = sealed->block.header.height;
  for (const auto& tx : sealed->block.transactions) {
    auto hash = tx_hash(tx);
    if (hash) committed_txs_[hash->bytes] = h;
  }
  for (const auto& [hash, err] : sealed->rejected) {
    rejected_txs_[hash.bytes] =
        std::string(error_name(err.code)) + (err.detail.empty() ? "" : ": " + err.detail);
  }
  return true;
}

uint64_t Node::height() const {
  std::lock_guard lock(mu_);
  return state_.height();
}

Hash256 Node::state_digest() const {
  std::lock_guard lock(mu_);
  return state_.state_digest();
}

Hash256 Node::tip_hash() const {
  std::lock_guard lock(mu_);
  return state_.tip_hash();
}

Result<Bytes> Node::get_block_bytes(uint64_t height) const {
  std::lock_guard lock(mu_);
  return store_->read(height);
}

Result<std::vector<ProcessEvent>> Node::get_device_history(const std::string& serial) const {
  std::lock_guard lock(mu_);
  return state_.registry().get_device_history(serial);
}

Result<DeviceRecord> Node::get_device(const std::string& serial) const {
  std::lock_guard lock(mu_);
  const auto* dev = state_.registry().find_device(serial);
  if (!dev) return Error{ErrorCode::NOT_FOUND, "unknown device"};
  return *dev;
}

Result<StakeholderStats> Node::get_stakeholder_stats(const PublicKeyId& id) const {
  std::lock_guard lock(mu_);
  return state_.registry().get_stakeholder_stats(id);
}

uint64_t Node::next_nonce_for(const PublicKeyId& sender) const {
  std::lock_guard lock(mu_);
  uint64_t next = state_.next_nonce(sender);
  auto it = pending_nonces_.find(sender.bytes);
  if (it != pending_nonces_.end()) {
    for (uint64_t n : it->second) next = std::max(next, n + 1);
  }
  return next;
}

std::optional<uint64_t> Node::tx_commit_height(const Hash256& hash) const {
  std::lock_guard lock(mu_);
  auto it = committed_txs_.find(hash.bytes);
  if (it == committed_txs_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Node::tx_rejection(const Hash256& hash) const {
  std::lock_guard lock(mu_);
  auto it = rejected_txs_.find(hash.bytes);
  if (it == rejected_txs_.end()) return std::nullopt;
  return it->second;
}

ChainReport Node::verify() const {
  std::lock_guard lock(mu_);
  auto raw = store_->read_all();
  if (!raw) {
    ChainReport report;
    report.ok = false;
    return report;
  }
  return verify_chain(raw.value(), config_.genesis);
}

Result<CustodyReport> Node::device_compliance(const std::string& serial) const {
  std::lock_guard lock(mu_);
  auto raw = store_->read_all();
  if (!raw) return raw.error();
  return reconstruct_custody(serial, raw.value(), config_.genesis, *cas_, toc_dir_);
}

SystemReport Node::full_audit() const {
  std::lock_guard lock(mu_);
  auto raw = store_->read_all();
  if (!raw) {
    SystemReport report;
    report.chain.ok = false;
    return report;
  }
  return verify_full(raw.value(), config_.genesis, *cas_, toc_dir_);
}

Result<Hash256> Node::put_record(const Bytes& bytes) { return cas_->put(bytes); }

Result<Bytes> Node::get_record(const Hash256& address) const { return cas_->get(address); }

Result<TocEntry> Node::toc_append(const PublicKeyId& owner, const std::string& key,
                                  const Hash256& content_hash, uint64_t index,
                                  const Signature& sig) {
  std::lock_guard lock(mu_);
  auto preimage = toc_append_preimage(owner, index, key, content_hash);
  if (!rlchain::verify(owner, preimage, sig))
    return Error{ErrorCode::PERMISSION_DENIED, "append not signed by the TOC owner"};
  if (!cas_->contains(content_hash))
    return Error{ErrorCode::NOT_FOUND, "content is not present in the store"};
  auto toc = TocLog::open(toc_dir_ / (owner.hex() + ".log"));
  if (!toc) return toc.error();
  if (index != toc->length())
    return Error{ErrorCode::OUT_OF_RANGE, "append index is not the next TOC index"};
  return toc->append(key, content_hash);
}

Result<std::vector<TocEntry>> Node::get_toc(const PublicKeyId& owner) const {
  std::lock_guard lock(mu_);
  auto toc = TocLog::open(toc_dir_ / (owner.hex() + ".log"));
  if (!toc) return toc.error();
  return toc->entries();
}

}  // namespace rlchain
