#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rlchain/codec.hpp"
#include "rlchain/domain.hpp"
#include "rlchain/errors.hpp"
#include "rlchain/hash.hpp"
#include "rlchain/keys.hpp"

namespace rlchain {

enum class TxType : uint8_t {
  REGISTER_STAKEHOLDER = 1,
  REGISTER_DEVICE = 2,
  RECORD_EVENT = 3,
  CLASSIFY_DEVICE = 4,
  ANCHOR_TOC = 5,
};

struct RegisterStakeholderPayload {
  PublicKeyId candidate;
  Role role = Role::CUSTOMER;
  std::string display_name;  // <= 256 chars

  bool operator==(const RegisterStakeholderPayload&) const = default;
};

struct ComponentEntry {
  ComponentType type = ComponentType::CPU;
  std::string serial;  // <= 128 chars
  Hash256 feature_info_hash;

  bool operator==(const ComponentEntry&) const = default;
};

struct RegisterDevicePayload {
  std::string serial;  // <= 128 chars
  std::string model;
  PublicKeyId original_manufacturer;
  std::vector<ComponentEntry> components;  // exactly one per component type

  bool operator==(const RegisterDevicePayload&) const = default;
};

struct RecordEventPayload {
  EventType event_type = EventType::COLLECTION;
  std::string device_serial;
  PublicKeyId counterparty;  // all-zero means none
  EventResult result = EventResult::NA;
  Hash256 detail_hash;
  // COMPONENT_REPLACEMENT only; zero/empty otherwise.
  ComponentType component_type = ComponentType::CPU;
  std::string new_component_serial;
  Hash256 new_component_feature_hash;

  bool operator==(const RecordEventPayload&) const = default;
};

struct ClassifyDevicePayload {
  std::string device_serial;
  Classification classification = Classification::NONE;
  Hash256 detail_hash;

  bool operator==(const ClassifyDevicePayload&) const = default;
};

struct AnchorTocPayload {
  uint64_t toc_length = 0;
  Hash256 toc_root;

  bool operator==(const AnchorTocPayload&) const = default;
};

using TxPayload = std::variant<RegisterStakeholderPayload, RegisterDevicePayload,
                               RecordEventPayload, ClassifyDevicePayload, AnchorTocPayload>;

// Signed state-change envelope. The signature covers the chain id followed by
// every field preceding it in the canonical encoding.
struct Transaction {
  TxPayload payload;
  uint64_t nonce = 0;
  PublicKeyId sender;
  Signature signature{};

  TxType type() const;

  bool operator==(const Transaction&) const = default;
};

// Canonical encoding: tag u8, payload fields in schema order, nonce, sender,
// signature last. Two logically equal transactions serialize identically.
Result<Bytes> canonical_serialize(const Transaction& tx);

// The byte sequence the signature is computed over: chain_id u64 BE followed
// by the canonical encoding without the trailing signature.
Result<Bytes> signing_bytes(const Transaction& tx, uint64_t chain_id);

Result<Transaction> deserialize_transaction(std::span<const uint8_t> data);

Result<Hash256> tx_hash(const Transaction& tx);

Transaction sign_transaction(TxPayload payload, uint64_t nonce, const Keypair& key,
                             uint64_t chain_id);

bool verify_transaction_signature(const Transaction& tx, uint64_t chain_id);

}  // namespace rlchain
