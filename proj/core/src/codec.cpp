#include "rlchain/codec.hpp"

#include <cstring>

namespace rlchain {

void Encoder::u8(uint8_t v) { out_.push_back(v); }

void Encoder::u32(uint32_t v) {
  for (int i = 3; i >= 0; --i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void Encoder::u64(uint64_t v) {
  for (int i = 7; i >= 0; --i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

bool Encoder::str(std::string_view s) {
  if (s.size() > kMaxStringBytes) return false;
  u32(static_cast<uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
  return true;
}

void Encoder::raw(std::span<const uint8_t> data) {
  out_.insert(out_.end(), data.begin(), data.end());
}

void Encoder::hash(const Hash256& h) { raw(h.bytes); }
void Encoder::key(const PublicKeyId& k) { raw(k.bytes); }
void Encoder::sig(const Signature& s) { raw(s); }

std::optional<uint8_t> Decoder::u8() {
  if (remaining() < 1) return std::nullopt;
  return data_[pos_++];
}

std::optional<uint32_t> Decoder::u32() {
  if (remaining() < 4) return std::nullopt;
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::optional<uint64_t> Decoder::u64() {
  if (remaining() < 8) return std::nullopt;
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::optional<std::string> Decoder::str() {
  auto len = u32();
  if (!len || *len > kMaxStringBytes || remaining() < *len) return std::nullopt;
  std::string s(reinterpret_cast<const char*>(data_.data() + pos_), *len);
  pos_ += *len;
  return s;
}

std::optional<Hash256> Decoder::hash() {
  if (remaining() < 32) return std::nullopt;
  Hash256 h;
  std::memcpy(h.bytes.data(), data_.data() + pos_, 32);
  pos_ += 32;
  return h;
}

std::optional<PublicKeyId> Decoder::key() {
  if (remaining() < 32) return std::nullopt;
  PublicKeyId k;
  std::memcpy(k.bytes.data(), data_.data() + pos_, 32);
  pos_ += 32;
  return k;
}

std::optional<Signature> Decoder::sig() {
  if (remaining() < 64) return std::nullopt;
  Signature s;
  std::memcpy(s.data(), data_.data() + pos_, 64);
  pos_ += 64;
  return s;
}

std::optional<Bytes> Decoder::raw(size_t n) {
  if (remaining() < n) return std::nullopt;
  Bytes b(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return b;
}

}  // namespace rlchain
