#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "rlchain/hash.hpp"
#include "rlchain/keys.hpp"

namespace rlchain {

// Canonical wire encoding: fixed-width big-endian integers, u32-BE
// length-prefixed byte strings, raw 32/64-byte fields. Text and byte-string
// fields are capped at 64 KiB.
inline constexpr size_t kMaxStringBytes = 64 * 1024;

class Encoder {
 public:
  void u8(uint8_t v);
  void u32(uint32_t v);
  void u64(uint64_t v);
  // false on oversize (> 64 KiB)
  bool str(std::string_view s);
  void raw(std::span<const uint8_t> data);
  void hash(const Hash256& h);
  void key(const PublicKeyId& k);
  void sig(const Signature& s);

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Decoder {
 public:
  explicit Decoder(std::span<const uint8_t> data) : data_(data) {}

  std::optional<uint8_t> u8();
  std::optional<uint32_t> u32();
  std::optional<uint64_t> u64();
  std::optional<std::string> str();
  std::optional<Hash256> hash();
  std::optional<PublicKeyId> key();
  std::optional<Signature> sig();
  std::optional<Bytes> raw(size_t n);

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace rlchain
