#include "rlchain/blockstore.hpp"

namespace rlchain {

namespace {

uint32_t read_u32be(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void write_u32be(std::ofstream& out, uint32_t v) {
  uint8_t buf[4] = {uint8_t(v >> 24), uint8_t(v >> 16), uint8_t(v >> 8), uint8_t(v)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

void write_u64be(std::ofstream& out, uint64_t v) {
  uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = uint8_t(v >> (8 * (7 - i)));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

}  // namespace

Result<BlockStore> BlockStore::open(const std::filesystem::path& log_path,
                                    const std::filesystem::path& index_path) {
  BlockStore store;
  store.log_path_ = log_path;
  store.index_path_ = index_path;

  std::ifstream log(log_path, std::ios::binary);
  if (!log) {
    // Fresh store: create empty files.
    std::ofstream(log_path, std::ios::binary);
    std::ofstream(index_path, std::ios::binary);
    return store;
  }
  Bytes data((std::istreambuf_iterator<char>(log)), std::istreambuf_iterator<char>());

  // Rebuild offsets by scanning the log; the sidecar index is derived data
  // and is rewritten if it disagrees.
  uint64_t pos = 0;
  uint64_t valid_end = 0;
  while (pos + 4 <= data.size()) {
    uint32_t len = read_u32be(data.data() + pos);
    if (pos + 4 + len > data.size()) break;  // truncated final record
    store.offsets_.push_back(pos);
    pos += 4 + len;
    valid_end = pos;
  }
  if (valid_end < data.size()) {
    // Drop the partial tail so subsequent appends start on a clean boundary.
    std::filesystem::resize_file(log_path, valid_end);
  }
  // Rewrite the index to match the scanned log.
  std::ofstream idx(index_path, std::ios::binary | std::ios::trunc);
  if (!idx) return Error{ErrorCode::NOT_FOUND, "cannot write index file"};
  for (uint64_t off : store.offsets_) write_u64be(idx, off);
  return store;
}

Status BlockStore::append(const Bytes& block_bytes) {
  std::ofstream log(log_path_, std::ios::binary | std::ios::app);
  if (!log) return Error{ErrorCode::NOT_FOUND, "cannot open block log for append"};
  uint64_t offset = std::filesystem::exists(log_path_) ? std::filesystem::file_size(log_path_) : 0;
  write_u32be(log, static_cast<uint32_t>(block_bytes.size()));
  log.write(reinterpret_cast<const char*>(block_bytes.data()),
            static_cast<std::streamsize>(block_bytes.size()));
  log.flush();
  if (!log) return Error{ErrorCode::INTEGRITY_FAILURE, "block log write failed"};

  std::ofstream idx(index_path_, std::ios::binary | std::ios::app);
  if (idx) write_u64be(idx, offset);
  offsets_.push_back(offset);
  return ok_status();
}

Result<Bytes> BlockStore::read(uint64_t index) const {
  if (index >= offsets_.size()) return Error{ErrorCode::OUT_OF_RANGE, "block index out of range"};
  std::ifstream log(log_path_, std::ios::binary);
  if (!log) return Error{ErrorCode::NOT_FOUND, "block log missing"};
  log.seekg(static_cast<std::streamoff>(offsets_[index]));
  uint8_t lenbuf[4];
  log.read(reinterpret_cast<char*>(lenbuf), 4);
  if (!log) return Error{ErrorCode::INTEGRITY_FAILURE, "block log truncated"};
  uint32_t len = read_u32be(lenbuf);
  Bytes out(len);
  log.read(reinterpret_cast<char*>(out.data()), len);
  if (!log) return Error{ErrorCode::INTEGRITY_FAILURE, "block log truncated"};
  return out;
}

Result<std::vector<Bytes>> BlockStore::read_all() const {
  std::vector<Bytes> blocks;
  blocks.reserve(offsets_.size());
  for (uint64_t i = 0; i < offsets_.size(); ++i) {
    auto b = read(i);
    if (!b) return b.error();
    blocks.push_back(std::move(b.value()));
  }
  return blocks;
}

}  // namespace rlchain
