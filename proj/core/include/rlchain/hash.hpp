#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rlchain {

using Bytes = std::vector<uint8_t>;

// 32-byte SHA-256 digest. Hex form is always lowercase, 64 chars.
struct Hash256 {
  std::array<uint8_t, 32> bytes{};

  bool is_zero() const;
  std::string hex() const;
  static std::optional<Hash256> from_hex(std::string_view hex);

  auto operator<=>(const Hash256&) const = default;
};

Hash256 sha256(std::span<const uint8_t> data);
Hash256 sha256(const Bytes& data);

std::string to_hex(std::span<const uint8_t> data);
std::optional<Bytes> from_hex(std::string_view hex);

}  // namespace rlchain
