#include "rlchain/cas.hpp"

#include <fstream>

namespace rlchain {

ContentStore::ContentStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path ContentStore::object_path(const Hash256& address) const {
  std::string hex = address.hex();
  return root_ / hex.substr(0, 2) / hex.substr(2, 2) / (hex + ".rec");
}

Result<Hash256> ContentStore::put(const Bytes& bytes) {
  if (bytes.size() > kMaxRecordBytes)
    return Error{ErrorCode::TOO_LARGE, "record exceeds the 1 MiB cap"};
  Hash256 address = sha256(bytes);
  auto path = object_path(address);
  if (std::filesystem::exists(path)) return address;  // idempotent
  std::filesystem::create_directories(path.parent_path());
  // tmp + rename so a concurrent reader never sees a partial record
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return Error{ErrorCode::NOT_FOUND, "cannot write to content store"};
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) return Error{ErrorCode::INTEGRITY_FAILURE, "content store write failed"};
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) return Error{ErrorCode::INTEGRITY_FAILURE, "content store rename failed"};
  return address;
}

Result<Bytes> ContentStore::get(const Hash256& address) const {
  auto path = object_path(address);
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error{ErrorCode::NOT_FOUND, "no record at this address"};
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (sha256(bytes) != address)
    return Error{ErrorCode::INTEGRITY_FAILURE, "stored record does not match its address"};
  return bytes;
}

bool ContentStore::contains(const Hash256& address) const {
  return std::filesystem::exists(object_path(address));
}

}  // namespace rlchain
