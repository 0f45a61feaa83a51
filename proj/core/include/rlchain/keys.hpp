#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "rlchain/hash.hpp"

namespace rlchain {

// Ed25519. The 32-byte public key doubles as the stakeholder address.
struct PublicKeyId {
  std::array<uint8_t, 32> bytes{};

  bool is_zero() const;
  std::string hex() const;
  static std::optional<PublicKeyId> from_hex(std::string_view hex);

  auto operator<=>(const PublicKeyId&) const = default;
};

using Signature = std::array<uint8_t, 64>;

struct Keypair {
  PublicKeyId pub;
  std::array<uint8_t, 32> seed{};  // secret

  static Keypair generate();
  static Keypair from_seed(const std::array<uint8_t, 32>& seed);
};

Signature sign(const Keypair& key, std::span<const uint8_t> message);
bool verify(const PublicKeyId& pub, std::span<const uint8_t> message, const Signature& sig);

}  // namespace rlchain
