#include "rlchain/toc.hpp"

#include <fstream>

#include "rlchain/codec.hpp"

namespace rlchain {

Bytes toc_entry_encoding(const std::string& key, const Hash256& content_hash) {
  Encoder enc;
  enc.u8(0x00);
  enc.str(key);
  enc.hash(content_hash);
  return enc.take();
}

Hash256 toc_entry_hash(const std::string& key, const Hash256& content_hash) {
  return sha256(toc_entry_encoding(key, content_hash));
}

Result<TocLog> TocLog::open(const std::filesystem::path& path) {
  TocLog toc;
  toc.path_ = path;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary);
    return toc;
  }
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Decoder dec(data);
  while (!dec.done()) {
    auto marker = dec.u8();
    auto key = dec.str();
    auto hash = dec.hash();
    if (!marker || *marker != 0x00 || !key || key->size() > kMaxTocKeyChars || !hash)
      return Error{ErrorCode::INTEGRITY_FAILURE, "malformed TOC log: " + path.string()};
    TocEntry entry{*key, *hash, toc_entry_hash(*key, *hash)};
    toc.entries_.push_back(std::move(entry));
  }
  return toc;
}

Result<TocEntry> TocLog::append(const std::string& key, const Hash256& content_hash) {
  if (key.empty() || key.size() > kMaxTocKeyChars)
    return Error{ErrorCode::INVALID_ARGUMENT, "TOC key must be 1..256 chars"};
  Bytes encoded = toc_entry_encoding(key, content_hash);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) return Error{ErrorCode::NOT_FOUND, "cannot open TOC log for append"};
  out.write(reinterpret_cast<const char*>(encoded.data()),
            static_cast<std::streamsize>(encoded.size()));
  out.flush();
  if (!out) return Error{ErrorCode::INTEGRITY_FAILURE, "TOC log write failed"};
  TocEntry entry{key, content_hash, sha256(encoded)};
  entries_.push_back(entry);
  return entry;
}

std::vector<Hash256> TocLog::entry_hashes(uint64_t prefix_length) const {
  std::vector<Hash256> hashes;
  uint64_t n = std::min<uint64_t>(prefix_length, entries_.size());
  hashes.reserve(n);
  for (uint64_t i = 0; i < n; ++i) hashes.push_back(entries_[i].entry_hash);
  return hashes;
}

Result<Hash256> TocLog::root(uint64_t prefix_length) const {
  if (prefix_length > entries_.size())
    return Error{ErrorCode::OUT_OF_RANGE, "prefix exceeds TOC length"};
  return merkle_root(entry_hashes(prefix_length));
}

Result<MerkleProof> TocLog::prove(uint64_t index, uint64_t anchored_length) const {
  if (anchored_length > entries_.size())
    return Error{ErrorCode::OUT_OF_RANGE, "anchored length exceeds TOC length"};
  if (index >= anchored_length)
    return Error{ErrorCode::OUT_OF_RANGE, "index is outside the anchored prefix"};
  return merkle_prove(entry_hashes(anchored_length), index);
}

bool verify_toc_membership(const TocEntry& entry, const MerkleProof& proof,
                           const TocAnchor& anchor) {
  if (proof.leaf_index >= anchor.toc_length) return false;
  Hash256 leaf = toc_entry_hash(entry.key, entry.content_hash);
  return merkle_verify(leaf, proof, anchor.toc_root);
}

}  // namespace rlchain
