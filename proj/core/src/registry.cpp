#include "rlchain/registry.hpp"

#include <algorithm>
#include <set>

#include "rlchain/codec.hpp"

namespace rlchain {

namespace {

bool has_event(const DeviceRecord& d, EventType type) {
  return std::any_of(d.events.begin(), d.events.end(),
                     [type](const ProcessEvent& e) { return e.event_type == type; });
}

// A FUNCTIONAL_TEST with result PASS must follow the last repair or
// component replacement.
bool tested_after_last_repair(const DeviceRecord& d) {
  int64_t last_repair = -1;
  int64_t last_pass = -1;
  for (const auto& e : d.events) {
    if (e.event_type == EventType::REPAIR || e.event_type == EventType::COMPONENT_REPLACEMENT)
      last_repair = static_cast<int64_t>(e.seq);
    if (e.event_type == EventType::FUNCTIONAL_TEST && e.result == EventResult::PASS)
      last_pass = static_cast<int64_t>(e.seq);
  }
  return last_pass >= 0 && last_pass > last_repair;
}

}  // namespace

bool role_permits_event(Role role, EventType event) {
  switch (event) {
    case EventType::COLLECTION:
      return role == Role::RETAILER;
    case EventType::CUSTODY_TRANSFER:
      return role == Role::RETAILER || role == Role::THIRD_PARTY_LOGISTICS ||
             role == Role::MANUFACTURER || role == Role::REFURBISHER;
    case EventType::INSPECTION:
    case EventType::PHYSICAL_CONDITION_ANALYSIS:
    case EventType::DATA_WIPE:
    case EventType::FUNCTIONAL_TEST:
    case EventType::CUSTOMIZATION_REMOVAL:
    case EventType::REPAIR:
    case EventType::COMPONENT_REPLACEMENT:
    case EventType::CLASSIFICATION:
      return role == Role::MANUFACTURER || role == Role::REFURBISHER || role == Role::RETAILER;
    case EventType::SALE:
    case EventType::DONATION:
      return role == Role::RETAILER || role == Role::MANUFACTURER || role == Role::REFURBISHER;
  }
  return false;
}

Status Registry::check_register_stakeholder(const PublicKeyId& signer,
                                            const RegisterStakeholderPayload& p) const {
  if (std::find(registrars_.begin(), registrars_.end(), signer) == registrars_.end())
    return Error{ErrorCode::PERMISSION_DENIED, "signer is not a genesis registrar"};
  if (p.candidate.is_zero())
    return Error{ErrorCode::INVALID_ARGUMENT, "candidate key is all-zero"};
  if (stakeholders_.contains(p.candidate.bytes))
    return Error{ErrorCode::ALREADY_EXISTS, "stakeholder already registered"};
  return ok_status();
}

Status Registry::register_stakeholder(const PublicKeyId& signer,
                                      const RegisterStakeholderPayload& p, uint64_t height) {
  auto status = check_register_stakeholder(signer, p);
  if (!status) return status;
  StakeholderRecord rec;
  rec.id = p.candidate;
  rec.role = p.role;
  rec.display_name = p.display_name;
  rec.registered_at = height;
  rec.active = true;
  stakeholders_.emplace(p.candidate.bytes, std::move(rec));
  return ok_status();
}

Status Registry::check_register_device(const PublicKeyId& actor,
                                       const RegisterDevicePayload& p) const {
  const auto* who = find_stakeholder(actor);
  if (!who || !who->active)
    return Error{ErrorCode::PERMISSION_DENIED, "actor is not a registered active stakeholder"};
  if (who->role != Role::MANUFACTURER && who->role != Role::RETAILER)
    return Error{ErrorCode::PERMISSION_DENIED, "only manufacturers and retailers register devices"};
  if (devices_.contains(p.serial))
    return Error{ErrorCode::ALREADY_EXISTS, "device serial already registered"};
  if (p.original_manufacturer.is_zero())
    return Error{ErrorCode::INVALID_ARGUMENT, "original manufacturer key is all-zero"};
  if (p.components.size() != static_cast<size_t>(kComponentTypeCount))
    return Error{ErrorCode::INVALID_BOM, "expected exactly one component per component type"};
  std::set<ComponentType> types;
  std::set<std::string> serials;
  for (const auto& c : p.components) {
    if (c.serial.empty()) return Error{ErrorCode::INVALID_BOM, "component serial is empty"};
    if (!types.insert(c.type).second)
      return Error{ErrorCode::INVALID_BOM, "duplicate component type"};
    if (!serials.insert(c.serial).second)
      return Error{ErrorCode::INVALID_BOM, "duplicate component serial"};
  }
  return ok_status();
}

Status Registry::register_device(const PublicKeyId& actor, const RegisterDevicePayload& p,
                                 uint64_t height) {
  (void)height;
  auto status = check_register_device(actor, p);
  if (!status) return status;
  DeviceRecord dev;
  dev.serial = p.serial;
  dev.model = p.model;
  dev.original_manufacturer = p.original_manufacturer;
  for (const auto& c : p.components)
    dev.components.push_back({c.type, c.serial, c.feature_info_hash, true});
  dev.state = DeviceState::REGISTERED;
  dev.custodian = actor;
  devices_.emplace(p.serial, std::move(dev));
  return ok_status();
}

Status Registry::check_event(const PublicKeyId& actor, const RecordEventPayload& p) const {
  const auto* who = find_stakeholder(actor);
  if (!who || !who->active)
    return Error{ErrorCode::PERMISSION_DENIED, "actor is not a registered active stakeholder"};
  if (!role_permits_event(who->role, p.event_type))
    return Error{ErrorCode::PERMISSION_DENIED, "role may not record this event type"};
  const auto* dev = find_device(p.device_serial);
  if (!dev) return Error{ErrorCode::NOT_FOUND, "unknown device"};
  if (p.detail_hash.is_zero())
    return Error{ErrorCode::MISSING_RECORD, "event has no off-chain record"};

  // Classification goes through classify_device, which knows the target class.
  if (p.event_type == EventType::CLASSIFICATION)
    return Error{ErrorCode::INVALID_TRANSITION, "classification must use the classify operation"};

  // COLLECTION takes custody; every other event requires it.
  if (p.event_type != EventType::COLLECTION && dev->custodian != actor)
    return Error{ErrorCode::PERMISSION_DENIED, "actor is not the device custodian"};

  // Only functional tests carry a pass/fail verdict.
  if (p.event_type == EventType::FUNCTIONAL_TEST) {
    if (p.result == EventResult::NA)
      return Error{ErrorCode::INVALID_TRANSITION, "functional test requires PASS or FAIL"};
  } else if (p.result != EventResult::NA) {
    return Error{ErrorCode::INVALID_TRANSITION, "only functional tests carry a result"};
  }

  switch (p.event_type) {
    case EventType::COLLECTION:
      if (dev->state != DeviceState::REGISTERED)
        return Error{ErrorCode::INVALID_TRANSITION, "collection requires state REGISTERED"};
      break;
    case EventType::CUSTODY_TRANSFER: {
      if (dev->state != DeviceState::COLLECTED && dev->state != DeviceState::IN_TRANSIT)
        return Error{ErrorCode::INVALID_TRANSITION, "transfer requires COLLECTED or IN_TRANSIT"};
      if (p.counterparty.is_zero())
        return Error{ErrorCode::INVALID_TRANSITION, "transfer requires a target"};
      const auto* target = find_stakeholder(p.counterparty);
      if (!target || !target->active)
        return Error{ErrorCode::NOT_FOUND, "transfer target is not a registered stakeholder"};
      if (target->role == Role::CUSTOMER || target->role == Role::GOVERNMENT)
        return Error{ErrorCode::INVALID_TRANSITION, "transfer target cannot hold RL custody"};
      break;
    }
    case EventType::INSPECTION:
      if (dev->state != DeviceState::COLLECTED && dev->state != DeviceState::IN_PROCESS)
        return Error{ErrorCode::INVALID_TRANSITION, "inspection requires COLLECTED or IN_PROCESS"};
      break;
    case EventType::PHYSICAL_CONDITION_ANALYSIS:
    case EventType::DATA_WIPE:
    case EventType::FUNCTIONAL_TEST:
    case EventType::CUSTOMIZATION_REMOVAL:
    case EventType::REPAIR:
      if (dev->state != DeviceState::IN_PROCESS)
        return Error{ErrorCode::INVALID_TRANSITION, "processing requires IN_PROCESS"};
      break;
    case EventType::COMPONENT_REPLACEMENT: {
      if (dev->state != DeviceState::IN_PROCESS)
        return Error{ErrorCode::INVALID_TRANSITION, "processing requires IN_PROCESS"};
      if (p.new_component_serial.empty())
        return Error{ErrorCode::INVALID_BOM, "replacement requires a new component serial"};
      for (const auto& c : dev->components) {
        if (c.serial == p.new_component_serial)
          return Error{ErrorCode::INVALID_BOM, "component serial already used in this device"};
      }
      break;
    }
    case EventType::SALE:
    case EventType::DONATION:
      if (dev->state != DeviceState::PROCESSED)
        return Error{ErrorCode::INVALID_TRANSITION, "release requires state PROCESSED"};
      if (!has_event(*dev, EventType::DATA_WIPE))
        return Error{ErrorCode::INVALID_TRANSITION, "release requires a prior data wipe"};
      break;
    case EventType::CLASSIFICATION:
      break;  // unreachable
  }
  return ok_status();
}

Status Registry::record_event(const PublicKeyId& actor, const RecordEventPayload& p,
                              uint64_t height) {
  auto status = check_event(actor, p);
  if (!status) return status;
  DeviceRecord& dev = devices_.at(p.device_serial);

  switch (p.event_type) {
    case EventType::COLLECTION:
      dev.state = DeviceState::COLLECTED;
      dev.custodian = actor;
      break;
    case EventType::CUSTODY_TRANSFER: {
      const auto* target = find_stakeholder(p.counterparty);
      dev.state = (target->role == Role::THIRD_PARTY_LOGISTICS) ? DeviceState::IN_TRANSIT
                                                                : DeviceState::COLLECTED;
      dev.custodian = p.counterparty;
      break;
    }
    case EventType::INSPECTION:
      dev.state = DeviceState::IN_PROCESS;
      break;
    case EventType::COMPONENT_REPLACEMENT: {
      for (auto& c : dev.components) {
        if (c.component_type == p.component_type && c.installed) c.installed = false;
      }
      dev.components.push_back(
          {p.component_type, p.new_component_serial, p.new_component_feature_hash, true});
      break;
    }
    case EventType::SALE:
    case EventType::DONATION:
      dev.state = DeviceState::FINALIZED;
      dev.disposition =
          (p.event_type == EventType::SALE) ? Disposition::SOLD_SECONDARY : Disposition::DONATED;
      if (!p.counterparty.is_zero()) dev.custodian = p.counterparty;
      break;
    default:
      break;  // other processing events leave state and custody unchanged
  }

  ProcessEvent ev;
  ev.event_type = p.event_type;
  ev.device_serial = p.device_serial;
  ev.actor = actor;
  ev.counterparty = p.counterparty;
  ev.result = p.result;
  ev.detail_hash = p.detail_hash;
  ev.seq = dev.event_count++;
  ev.block_height = height;
  dev.events.push_back(std::move(ev));
  return ok_status();
}

Status Registry::check_classify_inner(const StakeholderRecord& actor, const DeviceRecord& device,
                                      const ClassifyDevicePayload& p) const {
  if (!role_permits_event(actor.role, EventType::CLASSIFICATION))
    return Error{ErrorCode::PERMISSION_DENIED, "role may not classify devices"};
  if (device.custodian != actor.id)
    return Error{ErrorCode::PERMISSION_DENIED, "actor is not the device custodian"};
  if (p.detail_hash.is_zero())
    return Error{ErrorCode::MISSING_RECORD, "classification has no off-chain record"};
  if (device.state != DeviceState::IN_PROCESS)
    return Error{ErrorCode::INVALID_TRANSITION, "classification requires state IN_PROCESS"};
  if (p.classification == Classification::NONE || p.classification == Classification::RECYCLED)
    return Error{ErrorCode::INVALID_TRANSITION, "classification must be REMANUFACTURED or REFURBISHED"};
  if (p.classification == Classification::REMANUFACTURED &&
      actor.id != device.original_manufacturer)
    return Error{ErrorCode::PERMISSION_DENIED,
                 "only the original manufacturer may remanufacture"};
  if (!has_event(device, EventType::INSPECTION) ||
      !has_event(device, EventType::PHYSICAL_CONDITION_ANALYSIS) ||
      !has_event(device, EventType::DATA_WIPE))
    return Error{ErrorCode::INVALID_TRANSITION, "mandatory processing steps incomplete"};
  if (!tested_after_last_repair(device))
    return Error{ErrorCode::INVALID_TRANSITION,
                 "a passing functional test must follow the last repair"};
  return ok_status();
}

Status Registry::check_classify(const PublicKeyId& actor, const ClassifyDevicePayload& p) const {
  const auto* who = find_stakeholder(actor);
  if (!who || !who->active)
    return Error{ErrorCode::PERMISSION_DENIED, "actor is not a registered active stakeholder"};
  const auto* dev = find_device(p.device_serial);
  if (!dev) return Error{ErrorCode::NOT_FOUND, "unknown device"};
  return check_classify_inner(*who, *dev, p);
}

Status Registry::classify_device(const PublicKeyId& actor, const ClassifyDevicePayload& p,
                                 uint64_t height) {
  auto status = check_classify(actor, p);
  if (!status) return status;
  DeviceRecord& dev = devices_.at(p.device_serial);
  dev.classification = p.classification;
  dev.state = DeviceState::PROCESSED;

  ProcessEvent ev;
  ev.event_type = EventType::CLASSIFICATION;
  ev.device_serial = p.device_serial;
  ev.actor = actor;
  ev.result = EventResult::NA;
  ev.detail_hash = p.detail_hash;
  ev.seq = dev.event_count++;
  ev.block_height = height;
  dev.events.push_back(std::move(ev));
  return ok_status();
}

Status Registry::check_anchor(const PublicKeyId& sender, const AnchorTocPayload& p) const {
  const auto* who = find_stakeholder(sender);
  if (!who || !who->active)
    return Error{ErrorCode::PERMISSION_DENIED, "sender is not a registered active stakeholder"};
  uint64_t prev_len = who->toc_state ? who->toc_state->toc_length : 0;
  if (p.toc_length <= prev_len)
    return Error{ErrorCode::NO_PROGRESS, "anchor does not extend the previous one"};
  return ok_status();
}

Status Registry::apply_anchor(const PublicKeyId& sender, const AnchorTocPayload& p,
                              uint64_t height) {
  auto status = check_anchor(sender, p);
  if (!status) return status;
  stakeholders_.at(sender.bytes).toc_state = TocAnchor{sender, p.toc_length, p.toc_root, height};
  return ok_status();
}

const StakeholderRecord* Registry::find_stakeholder(const PublicKeyId& id) const {
  auto it = stakeholders_.find(id.bytes);
  return it == stakeholders_.end() ? nullptr : &it->second;
}

const DeviceRecord* Registry::find_device(const std::string& serial) const {
  auto it = devices_.find(serial);
  return it == devices_.end() ? nullptr : &it->second;
}

Result<std::vector<ProcessEvent>> Registry::get_device_history(const std::string& serial) const {
  const auto* dev = find_device(serial);
  if (!dev) return Error{ErrorCode::NOT_FOUND, "unknown device"};
  return dev->events;
}

Result<StakeholderStats> Registry::get_stakeholder_stats(const PublicKeyId& id) const {
  const auto* who = find_stakeholder(id);
  if (!who) return Error{ErrorCode::NOT_FOUND, "unknown stakeholder"};
  StakeholderStats stats;
  std::set<std::string> handled;
  for (const auto& [serial, dev] : devices_) {
    for (const auto& ev : dev.events) {
      if (ev.actor == id) {
        stats.event_counts[static_cast<size_t>(ev.event_type)]++;
        handled.insert(serial);
      }
    }
  }
  stats.devices_handled = handled.size();
  stats.latest_anchor = who->toc_state;
  return stats;
}

Hash256 Registry::state_digest() const {
  Encoder enc;
  enc.u64(stakeholders_.size());
  for (const auto& [id, s] : stakeholders_) {
    enc.key(s.id);
    enc.u8(static_cast<uint8_t>(s.role));
    enc.str(s.display_name);
    enc.u64(s.registered_at);
    enc.u8(s.active ? 1 : 0);
    if (s.toc_state) {
      enc.u8(1);
      enc.u64(s.toc_state->toc_length);
      enc.hash(s.toc_state->toc_root);
      enc.u64(s.toc_state->anchored_at);
    } else {
      enc.u8(0);
    }
  }
  enc.u64(devices_.size());
  for (const auto& [serial, d] : devices_) {
    enc.str(d.serial);
    enc.str(d.model);
    enc.key(d.original_manufacturer);
    enc.u8(static_cast<uint8_t>(d.state));
    enc.u8(static_cast<uint8_t>(d.classification));
    enc.u8(static_cast<uint8_t>(d.disposition));
    enc.key(d.custodian);
    enc.u64(d.event_count);
    enc.u32(static_cast<uint32_t>(d.components.size()));
    for (const auto& c : d.components) {
      enc.u8(static_cast<uint8_t>(c.component_type));
      enc.str(c.serial);
      enc.hash(c.feature_info_hash);
      enc.u8(c.installed ? 1 : 0);
    }
    for (const auto& e : d.events) {
      enc.u8(static_cast<uint8_t>(e.event_type));
      enc.key(e.actor);
      enc.key(e.counterparty);
      enc.u8(static_cast<uint8_t>(e.result));
      enc.hash(e.detail_hash);
      enc.u64(e.seq);
      enc.u64(e.block_height);
    }
  }
  return sha256(enc.bytes());
}

}  // namespace rlchain
