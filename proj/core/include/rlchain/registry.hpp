#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlchain/anchor.hpp"
#include "rlchain/domain.hpp"
#include "rlchain/errors.hpp"
#include "rlchain/transaction.hpp"

namespace rlchain {

struct StakeholderRecord {
  PublicKeyId id;
  Role role = Role::CUSTOMER;
  std::string display_name;
  uint64_t registered_at = 0;
  bool active = true;
  std::optional<TocAnchor> toc_state;
};

struct ComponentRecord {
  ComponentType component_type = ComponentType::CPU;
  std::string serial;
  Hash256 feature_info_hash;
  bool installed = true;
};

struct ProcessEvent {
  EventType event_type = EventType::COLLECTION;
  std::string device_serial;
  PublicKeyId actor;
  PublicKeyId counterparty;  // all-zero means none
  EventResult result = EventResult::NA;
  Hash256 detail_hash;
  uint64_t seq = 0;
  uint64_t block_height = 0;
};

struct DeviceRecord {
  std::string serial;
  std::string model;
  PublicKeyId original_manufacturer;
  std::vector<ComponentRecord> components;
  DeviceState state = DeviceState::REGISTERED;
  Classification classification = Classification::NONE;
  Disposition disposition = Disposition::NONE;
  PublicKeyId custodian;
  uint64_t event_count = 0;
  std::vector<ProcessEvent> events;
};

struct StakeholderStats {
  std::array<uint64_t, kEventTypeCount> event_counts{};  // as actor
  uint64_t devices_handled = 0;                          // distinct devices acted on
  std::optional<TocAnchor> latest_anchor;
};

// Normative role x event permission matrix. COLLECTION: retailer only;
// transfers: retailer/3PL/manufacturer/refurbisher; processing and
// release events: manufacturer/refurbisher/retailer; CUSTOMER and
// GOVERNMENT never write.
bool role_permits_event(Role role, EventType event);

// Deterministic replication of the three interacting contracts
// (stakeholders, processes, products) with role-based access control and the
// device lifecycle machine. Mutations happen only through the ledger commit
// path; all getters are read-only.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<PublicKeyId> registrars) : registrars_(std::move(registrars)) {}

  Status register_stakeholder(const PublicKeyId& signer, const RegisterStakeholderPayload& p,
                              uint64_t height);
  Status register_device(const PublicKeyId& actor, const RegisterDevicePayload& p,
                         uint64_t height);
  Status record_event(const PublicKeyId& actor, const RecordEventPayload& p, uint64_t height);
  Status classify_device(const PublicKeyId& actor, const ClassifyDevicePayload& p,
                         uint64_t height);
  Status apply_anchor(const PublicKeyId& sender, const AnchorTocPayload& p, uint64_t height);

  // Validity checks without mutation; each mirrors the corresponding apply.
  Status check_register_stakeholder(const PublicKeyId& signer,
                                    const RegisterStakeholderPayload& p) const;
  Status check_register_device(const PublicKeyId& actor, const RegisterDevicePayload& p) const;
  Status check_event(const PublicKeyId& actor, const RecordEventPayload& p) const;
  Status check_classify(const PublicKeyId& actor, const ClassifyDevicePayload& p) const;
  Status check_anchor(const PublicKeyId& sender, const AnchorTocPayload& p) const;

  const StakeholderRecord* find_stakeholder(const PublicKeyId& id) const;
  const DeviceRecord* find_device(const std::string& serial) const;

  Result<std::vector<ProcessEvent>> get_device_history(const std::string& serial) const;
  Result<StakeholderStats> get_stakeholder_stats(const PublicKeyId& id) const;

  const std::map<std::array<uint8_t, 32>, StakeholderRecord>& stakeholders() const {
    return stakeholders_;
  }
  const std::map<std::string, DeviceRecord>& devices() const { return devices_; }

  // Digest over the full materialized state, deterministic across replays.
  Hash256 state_digest() const;

 private:
  Status check_classify_inner(const StakeholderRecord& actor, const DeviceRecord& device,
                              const ClassifyDevicePayload& p) const;

  std::vector<PublicKeyId> registrars_;
  std::map<std::array<uint8_t, 32>, StakeholderRecord> stakeholders_;
  std::map<std::string, DeviceRecord> devices_;
};

}  // namespace rlchain
