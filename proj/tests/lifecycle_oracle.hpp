#pragma once

// Independent re-derivation of the device lifecycle / permission rules,
// written as a flat predicate over a minimal state model rather than the
// registry's record structures. Used to cross-check the registry on random
// action sequences.

#include <map>
#include <optional>
#include <set>
#include <string>

#include "rlchain/transaction.hpp"

namespace rltest {

using namespace rlchain;

struct OracleDevice {
  PublicKeyId original_manufacturer;
  DeviceState state = DeviceState::REGISTERED;
  PublicKeyId custodian;
  bool seen_inspection = false;
  bool seen_pca = false;
  bool seen_wipe = false;
  long last_repair = -1;
  long last_pass = -1;
  long next_seq = 0;
  std::set<std::string> used_serials;
};

struct OracleWorld {
  std::map<std::array<uint8_t, 32>, Role> roles;
  std::map<std::string, OracleDevice> devices;

  std::optional<Role> role_of(const PublicKeyId& id) const {
    auto it = roles.find(id.bytes);
    if (it == roles.end()) return std::nullopt;
    return it->second;
  }
};

inline bool oracle_role_allows(Role r, EventType e) {
  // Hand-written 6x12 table, rows in Role order, columns in EventType order.
  // 1 = may record. CUSTOMER and GOVERNMENT rows are all zero.
  static const int table[6][12] = {
      /* CUSTOMER     */ {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      /* RETAILER     */ {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
      /* MANUFACTURER */ {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
      /* 3PL          */ {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      /* GOVERNMENT   */ {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      /* REFURBISHER  */ {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
  };
  return table[static_cast<int>(r)][static_cast<int>(e)] == 1;
}

// Accept/reject for a RECORD_EVENT action. Mirrors the normative rules from
// first principles; deliberately no shared code with the registry.
inline bool oracle_accepts_event(const OracleWorld& w, const PublicKeyId& actor,
                                 const RecordEventPayload& p) {
  auto role = w.role_of(actor);
  if (!role) return false;
  if (!oracle_role_allows(*role, p.event_type)) return false;
  auto dev_it = w.devices.find(p.device_serial);
  if (dev_it == w.devices.end()) return false;
  const OracleDevice& d = dev_it->second;
  if (p.detail_hash.is_zero()) return false;
  if (p.event_type == EventType::CLASSIFICATION) return false;  // dedicated op only
  if (p.event_type != EventType::COLLECTION && !(d.custodian == actor)) return false;
  if (p.event_type == EventType::FUNCTIONAL_TEST) {
    if (p.result != EventResult::PASS && p.result != EventResult::FAIL) return false;
  } else if (p.result != EventResult::NA) {
    return false;
  }

  switch (p.event_type) {
    case EventType::COLLECTION:
      return d.state == DeviceState::REGISTERED;
    case EventType::CUSTODY_TRANSFER: {
      if (d.state != DeviceState::COLLECTED && d.state != DeviceState::IN_TRANSIT) return false;
      if (p.counterparty.is_zero()) return false;
      auto target = w.role_of(p.counterparty);
      if (!target) return false;
      return *target == Role::RETAILER || *target == Role::MANUFACTURER ||
             *target == Role::THIRD_PARTY_LOGISTICS || *target == Role::REFURBISHER;
    }
    case EventType::INSPECTION:
      return d.state == DeviceState::COLLECTED || d.state == DeviceState::IN_PROCESS;
    case EventType::PHYSICAL_CONDITION_ANALYSIS:
    case EventType::DATA_WIPE:
    case EventType::FUNCTIONAL_TEST:
    case EventType::CUSTOMIZATION_REMOVAL:
    case EventType::REPAIR:
      return d.state == DeviceState::IN_PROCESS;
    case EventType::COMPONENT_REPLACEMENT:
      return d.state == DeviceState::IN_PROCESS && !p.new_component_serial.empty() &&
             !d.used_serials.contains(p.new_component_serial);
    case EventType::SALE:
    case EventType::DONATION:
      return d.state == DeviceState::PROCESSED && d.seen_wipe;
    case EventType::CLASSIFICATION:
      return false;
  }
  return false;
}

inline void oracle_apply_event(OracleWorld& w, const PublicKeyId& actor,
                               const RecordEventPayload& p) {
  OracleDevice& d = w.devices.at(p.device_serial);
  long seq = d.next_seq++;
  switch (p.event_type) {
    case EventType::COLLECTION:
      d.state = DeviceState::COLLECTED;
      d.custodian = actor;
      break;
    case EventType::CUSTODY_TRANSFER:
      d.custodian = p.counterparty;
      d.state = (w.role_of(p.counterparty) == Role::THIRD_PARTY_LOGISTICS)
                    ? DeviceState::IN_TRANSIT
                    : DeviceState::COLLECTED;
      break;
    case EventType::INSPECTION:
      d.state = DeviceState::IN_PROCESS;
      d.seen_inspection = true;
      break;
    case EventType::PHYSICAL_CONDITION_ANALYSIS:
      d.seen_pca = true;
      break;
    case EventType::DATA_WIPE:
      d.seen_wipe = true;
      break;
    case EventType::FUNCTIONAL_TEST:
      if (p.result == EventResult::PASS) d.last_pass = seq;
      break;
    case EventType::REPAIR:
      d.last_repair = seq;
      break;
    case EventType::COMPONENT_REPLACEMENT:
      d.last_repair = seq;
      d.used_serials.insert(p.new_component_serial);
      break;
    case EventType::SALE:
    case EventType::DONATION:
      d.state = DeviceState::FINALIZED;
      if (!p.counterparty.is_zero()) d.custodian = p.counterparty;
      break;
    default:
      break;
  }
}

inline bool oracle_accepts_classify(const OracleWorld& w, const PublicKeyId& actor,
                                    const ClassifyDevicePayload& p) {
  auto role = w.role_of(actor);
  if (!role) return false;
  if (*role != Role::RETAILER && *role != Role::MANUFACTURER && *role != Role::REFURBISHER)
    return false;
  auto dev_it = w.devices.find(p.device_serial);
  if (dev_it == w.devices.end()) return false;
  const OracleDevice& d = dev_it->second;
  if (!(d.custodian == actor)) return false;
  if (p.detail_hash.is_zero()) return false;
  if (d.state != DeviceState::IN_PROCESS) return false;
  if (p.classification != Classification::REMANUFACTURED &&
      p.classification != Classification::REFURBISHED)
    return false;
  if (p.classification == Classification::REMANUFACTURED &&
      !(actor == d.original_manufacturer))
    return false;
  if (!d.seen_inspection || !d.seen_pca || !d.seen_wipe) return false;
  return d.last_pass > d.last_repair && d.last_pass >= 0;
}

inline void oracle_apply_classify(OracleWorld& w, const ClassifyDevicePayload& p) {
  OracleDevice& d = w.devices.at(p.device_serial);
  d.state = DeviceState::PROCESSED;
  d.next_seq++;
}

}  // namespace rltest
