#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "rlchain/errors.hpp"
#include "rlchain/hash.hpp"

namespace rlchain {

// Append-only block log: one record per block, u32 BE length prefix + block
// bytes, with a sidecar index file of u64 BE offsets. Opening tolerates a
// truncated final record (recovers to the last complete block) but surfaces
// any other inconsistency.
class BlockStore {
 public:
  static Result<BlockStore> open(const std::filesystem::path& log_path,
                                 const std::filesystem::path& index_path);

  Status append(const Bytes& block_bytes);
  Result<Bytes> read(uint64_t index) const;
  Result<std::vector<Bytes>> read_all() const;

  uint64_t size() const { return offsets_.size(); }

 private:
  BlockStore() = default;

  std::filesystem::path log_path_;
  std::filesystem::path index_path_;
  std::vector<uint64_t> offsets_;
};

}  // namespace rlchain
