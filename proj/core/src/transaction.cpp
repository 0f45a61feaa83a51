#include "rlchain/transaction.hpp"

#include <stdexcept>

namespace rlchain {

namespace {

constexpr size_t kMaxNameChars = 256;
constexpr size_t kMaxSerialChars = 128;

bool encode_payload(Encoder& enc, const TxPayload& payload) {
  return std::visit(
      [&enc](const auto& p) -> bool {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RegisterStakeholderPayload>) {
          if (p.display_name.size() > kMaxNameChars) return false;
          enc.key(p.candidate);
          enc.u8(static_cast<uint8_t>(p.role));
          return enc.str(p.display_name);
        } else if constexpr (std::is_same_v<P, RegisterDevicePayload>) {
          if (p.serial.empty() || p.serial.size() > kMaxSerialChars) return false;
          if (!enc.str(p.serial) || !enc.str(p.model)) return false;
          enc.key(p.original_manufacturer);
          enc.u32(static_cast<uint32_t>(p.components.size()));
          for (const auto& c : p.components) {
            if (c.serial.size() > kMaxSerialChars) return false;
            enc.u8(static_cast<uint8_t>(c.type));
            if (!enc.str(c.serial)) return false;
            enc.hash(c.feature_info_hash);
          }
          return true;
        } else if constexpr (std::is_same_v<P, RecordEventPayload>) {
          if (p.device_serial.empty() || p.device_serial.size() > kMaxSerialChars) return false;
          enc.u8(static_cast<uint8_t>(p.event_type));
          if (!enc.str(p.device_serial)) return false;
          enc.key(p.counterparty);
          enc.u8(static_cast<uint8_t>(p.result));
          enc.hash(p.detail_hash);
          enc.u8(static_cast<uint8_t>(p.component_type));
          if (!enc.str(p.new_component_serial)) return false;
          enc.hash(p.new_component_feature_hash);
          return true;
        } else if constexpr (std::is_same_v<P, ClassifyDevicePayload>) {
          if (p.device_serial.empty() || p.device_serial.size() > kMaxSerialChars) return false;
          if (!enc.str(p.device_serial)) return false;
          enc.u8(static_cast<uint8_t>(p.classification));
          enc.hash(p.detail_hash);
          return true;
        } else if constexpr (std::is_same_v<P, AnchorTocPayload>) {
          enc.u64(p.toc_length);
          enc.hash(p.toc_root);
          return true;
        }
      },
      payload);
}

template <typename E>
std::optional<E> checked_enum(std::optional<uint8_t> raw, int count) {
  if (!raw || *raw >= count) return std::nullopt;
  return static_cast<E>(*raw);
}

std::optional<TxPayload> decode_payload(TxType type, Decoder& dec) {
  switch (type) {
    case TxType::REGISTER_STAKEHOLDER: {
      RegisterStakeholderPayload p;
      auto candidate = dec.key();
      auto role = checked_enum<Role>(dec.u8(), kRoleCount);
      auto name = dec.str();
      if (!candidate || !role || !name || name->size() > kMaxNameChars) return std::nullopt;
      p.candidate = *candidate;
      p.role = *role;
      p.display_name = std::move(*name);
      return TxPayload{std::move(p)};
    }
    case TxType::REGISTER_DEVICE: {
      RegisterDevicePayload p;
      auto serial = dec.str();
      auto model = dec.str();
      auto mfr = dec.key();
      auto count = dec.u32();
      if (!serial || serial->empty() || serial->size() > kMaxSerialChars) return std::nullopt;
      if (!model || !mfr || !count || *count > 64) return std::nullopt;
      p.serial = std::move(*serial);
      p.model = std::move(*model);
      p.original_manufacturer = *mfr;
      for (uint32_t i = 0; i < *count; ++i) {
        ComponentEntry c;
        auto type8 = checked_enum<ComponentType>(dec.u8(), kComponentTypeCount);
        auto cserial = dec.str();
        auto fh = dec.hash();
        if (!type8 || !cserial || cserial->size() > kMaxSerialChars || !fh) return std::nullopt;
        c.type = *type8;
        c.serial = std::move(*cserial);
        c.feature_info_hash = *fh;
        p.components.push_back(std::move(c));
      }
      return TxPayload{std::move(p)};
    }
    case TxType::RECORD_EVENT: {
      RecordEventPayload p;
      auto ev = checked_enum<EventType>(dec.u8(), kEventTypeCount);
      auto serial = dec.str();
      auto cp = dec.key();
      auto result = checked_enum<EventResult>(dec.u8(), 3);
      auto dh = dec.hash();
      auto ct = checked_enum<ComponentType>(dec.u8(), kComponentTypeCount);
      auto ncs = dec.str();
      auto nfh = dec.hash();
      if (!ev || !serial || serial->empty() || serial->size() > kMaxSerialChars) return std::nullopt;
      if (!cp || !result || !dh || !ct || !ncs || !nfh) return std::nullopt;
      p.event_type = *ev;
      p.device_serial = std::move(*serial);
      p.counterparty = *cp;
      p.result = *result;
      p.detail_hash = *dh;
      p.component_type = *ct;
      p.new_component_serial = std::move(*ncs);
      p.new_component_feature_hash = *nfh;
      return TxPayload{std::move(p)};
    }
    case TxType::CLASSIFY_DEVICE: {
      ClassifyDevicePayload p;
      auto serial = dec.str();
      auto cls = checked_enum<Classification>(dec.u8(), 4);
      auto dh = dec.hash();
      if (!serial || serial->empty() || serial->size() > kMaxSerialChars || !cls || !dh)
        return std::nullopt;
      p.device_serial = std::move(*serial);
      p.classification = *cls;
      p.detail_hash = *dh;
      return TxPayload{std::move(p)};
    }
    case TxType::ANCHOR_TOC: {
      AnchorTocPayload p;
      auto len = dec.u64();
      auto root = dec.hash();
      if (!len || !root) return std::nullopt;
      p.toc_length = *len;
      p.toc_root = *root;
      return TxPayload{std::move(p)};
    }
  }
  return std::nullopt;
}

Result<Bytes> serialize_unsigned(const Transaction& tx) {
  Encoder enc;
  enc.u8(static_cast<uint8_t>(tx.type()));
  if (!encode_payload(enc, tx.payload))
    return Error{ErrorCode::SERIALIZATION_ERROR, "payload violates schema"};
  enc.u64(tx.nonce);
  enc.key(tx.sender);
  return enc.take();
}

}  // namespace

TxType Transaction::type() const {
  return std::visit(
      [](const auto& p) -> TxType {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RegisterStakeholderPayload>)
          return TxType::REGISTER_STAKEHOLDER;
        else if constexpr (std::is_same_v<P, RegisterDevicePayload>)
          return TxType::REGISTER_DEVICE;
        else if constexpr (std::is_same_v<P, RecordEventPayload>)
          return TxType::RECORD_EVENT;
        else if constexpr (std::is_same_v<P, ClassifyDevicePayload>)
          return TxType::CLASSIFY_DEVICE;
        else
          return TxType::ANCHOR_TOC;
      },
      payload);
}

Result<Bytes> canonical_serialize(const Transaction& tx) {
  auto bytes = serialize_unsigned(tx);
  if (!bytes) return bytes;
  Encoder enc;
  enc.raw(bytes.value());
  enc.sig(tx.signature);
  return enc.take();
}

Result<Bytes> signing_bytes(const Transaction& tx, uint64_t chain_id) {
  auto bytes = serialize_unsigned(tx);
  if (!bytes) return bytes;
  Encoder enc;
  enc.u64(chain_id);
  enc.raw(bytes.value());
  return enc.take();
}

Result<Transaction> deserialize_transaction(std::span<const uint8_t> data) {
  Decoder dec(data);
  auto tag = dec.u8();
  if (!tag || *tag < 1 || *tag > 5)
    return Error{ErrorCode::SERIALIZATION_ERROR, "bad transaction tag"};
  auto payload = decode_payload(static_cast<TxType>(*tag), dec);
  if (!payload) return Error{ErrorCode::SERIALIZATION_ERROR, "malformed payload"};
  Transaction tx;
  tx.payload = std::move(*payload);
  auto nonce = dec.u64();
  auto sender = dec.key();
  auto sig = dec.sig();
  if (!nonce || !sender || !sig || !dec.done())
    return Error{ErrorCode::SERIALIZATION_ERROR, "malformed transaction trailer"};
  tx.nonce = *nonce;
  tx.sender = *sender;
  tx.signature = *sig;
  return tx;
}

Result<Hash256> tx_hash(const Transaction& tx) {
  auto bytes = canonical_serialize(tx);
  if (!bytes) return bytes.error();
  return sha256(bytes.value());
}

Transaction sign_transaction(TxPayload payload, uint64_t nonce, const Keypair& key,
                             uint64_t chain_id) {
  Transaction tx;
  tx.payload = std::move(payload);
  tx.nonce = nonce;
  tx.sender = key.pub;
  auto msg = signing_bytes(tx, chain_id);
  if (!msg) throw std::invalid_argument(msg.error().detail);
  tx.signature = sign(key, msg.value());
  return tx;
}

bool verify_transaction_signature(const Transaction& tx, uint64_t chain_id) {
  auto msg = signing_bytes(tx, chain_id);
  if (!msg) return false;
  return verify(tx.sender, msg.value(), tx.signature);
}

}  // namespace rlchain
