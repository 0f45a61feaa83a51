#include "rlchain/hash.hpp"

#include <sodium.h>

#include <algorithm>

namespace rlchain {

namespace {
const char* kHexDigits = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

bool Hash256::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](uint8_t b) { return b == 0; });
}

std::string Hash256::hex() const { return to_hex(bytes); }

std::optional<Hash256> Hash256::from_hex(std::string_view hex) {
  auto raw = rlchain::from_hex(hex);
  if (!raw || raw->size() != 32) return std::nullopt;
  Hash256 h;
  std::copy(raw->begin(), raw->end(), h.bytes.begin());
  return h;
}

Hash256 sha256(std::span<const uint8_t> data) {
  Hash256 out;
  crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
  return out;
}

Hash256 sha256(const Bytes& data) { return sha256(std::span<const uint8_t>(data)); }

std::string to_hex(std::span<const uint8_t> data) {
  std::string s;
  s.reserve(data.size() * 2);
  for (uint8_t b : data) {
    s.push_back(kHexDigits[b >> 4]);
    s.push_back(kHexDigits[b & 0x0f]);
  }
  return s;
}

std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  Bytes out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace rlchain
