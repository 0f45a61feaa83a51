#pragma once

#include <filesystem>

#include "rlchain/errors.hpp"
#include "rlchain/hash.hpp"

namespace rlchain {

inline constexpr size_t kMaxRecordBytes = 1024 * 1024;  // 1 MiB

// Local content-addressed store. Layout: two-level hex fan-out by address
// prefix, aa/bb/<64-hex>.rec. Append-only; put is idempotent; get verifies
// the digest before returning and surfaces corruption as INTEGRITY_FAILURE,
// never as wrong data.
class ContentStore {
 public:
  explicit ContentStore(std::filesystem::path root);

  Result<Hash256> put(const Bytes& bytes);
  Result<Bytes> get(const Hash256& address) const;
  bool contains(const Hash256& address) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path object_path(const Hash256& address) const;

  std::filesystem::path root_;
};

}  // namespace rlchain
