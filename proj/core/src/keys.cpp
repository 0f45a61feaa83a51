#include "rlchain/keys.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace rlchain {

namespace {
void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
  });
}
}  // namespace

bool PublicKeyId::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](uint8_t b) { return b == 0; });
}

std::string PublicKeyId::hex() const { return to_hex(bytes); }

std::optional<PublicKeyId> PublicKeyId::from_hex(std::string_view hex) {
  auto raw = rlchain::from_hex(hex);
  if (!raw || raw->size() != 32) return std::nullopt;
  PublicKeyId k;
  std::copy(raw->begin(), raw->end(), k.bytes.begin());
  return k;
}

Keypair Keypair::generate() {
  ensure_sodium();
  std::array<uint8_t, 32> seed;
  randombytes_buf(seed.data(), seed.size());
  return from_seed(seed);
}

Keypair Keypair::from_seed(const std::array<uint8_t, 32>& seed) {
  ensure_sodium();
  Keypair kp;
  kp.seed = seed;
  std::array<uint8_t, crypto_sign_SECRETKEYBYTES> sk;
  crypto_sign_seed_keypair(kp.pub.bytes.data(), sk.data(), seed.data());
  sodium_memzero(sk.data(), sk.size());
  return kp;
}

Signature sign(const Keypair& key, std::span<const uint8_t> message) {
  ensure_sodium();
  std::array<uint8_t, crypto_sign_SECRETKEYBYTES> sk;
  std::array<uint8_t, crypto_sign_PUBLICKEYBYTES> pk;
  crypto_sign_seed_keypair(pk.data(), sk.data(), key.seed.data());
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk.data());
  sodium_memzero(sk.data(), sk.size());
  return sig;
}

bool verify(const PublicKeyId& pub, std::span<const uint8_t> message, const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(),
                                     pub.bytes.data()) == 0;
}

}  // namespace rlchain
