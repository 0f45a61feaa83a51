#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rlchain/anchor.hpp"
#include "rlchain/errors.hpp"
#include "rlchain/merkle.hpp"

namespace rlchain {

inline constexpr size_t kMaxTocKeyChars = 256;

struct TocEntry {
  std::string key;
  Hash256 content_hash;
  Hash256 entry_hash;  // SHA-256 over the encoded entry

  bool operator==(const TocEntry&) const = default;
};

// Entry encoding, which is also the entry_hash preimage:
// 0x00 || u32 BE key length || key || content_hash.
Bytes toc_entry_encoding(const std::string& key, const Hash256& content_hash);
Hash256 toc_entry_hash(const std::string& key, const Hash256& content_hash);

// A stakeholder's ordered, append-only Table of Contents, persisted as a log
// of encoded entries.
class TocLog {
 public:
  static Result<TocLog> open(const std::filesystem::path& path);

  Result<TocEntry> append(const std::string& key, const Hash256& content_hash);

  const std::vector<TocEntry>& entries() const { return entries_; }
  uint64_t length() const { return entries_.size(); }

  std::vector<Hash256> entry_hashes(uint64_t prefix_length) const;
  // Root over the first `prefix_length` entries (the anchored prefix).
  Result<Hash256> root(uint64_t prefix_length) const;

  Result<MerkleProof> prove(uint64_t index, uint64_t anchored_length) const;

 private:
  TocLog() = default;

  std::filesystem::path path_;
  std::vector<TocEntry> entries_;
};

bool verify_toc_membership(const TocEntry& entry, const MerkleProof& proof,
                           const TocAnchor& anchor);

}  // namespace rlchain
