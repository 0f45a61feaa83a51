#include "rlchain/domain.hpp"

#include <array>

namespace rlchain {

namespace {
constexpr std::array<const char*, kRoleCount> kRoleNames = {
    "CUSTOMER", "RETAILER", "MANUFACTURER", "THIRD_PARTY_LOGISTICS", "GOVERNMENT", "REFURBISHER"};

constexpr std::array<const char*, kComponentTypeCount> kComponentNames = {
    "CPU", "CAMERA", "BATTERY", "DISPLAY", "INTERNAL_MEMORY", "MOTHERBOARD"};

constexpr std::array<const char*, kEventTypeCount> kEventNames = {
    "COLLECTION",         "CUSTODY_TRANSFER", "INSPECTION",
    "PHYSICAL_CONDITION_ANALYSIS", "DATA_WIPE", "FUNCTIONAL_TEST",
    "CUSTOMIZATION_REMOVAL", "REPAIR", "COMPONENT_REPLACEMENT",
    "CLASSIFICATION", "SALE", "DONATION"};

constexpr std::array<const char*, 6> kStateNames = {
    "REGISTERED", "COLLECTED", "IN_TRANSIT", "IN_PROCESS", "PROCESSED", "FINALIZED"};

constexpr std::array<const char*, 4> kClassificationNames = {
    "NONE", "REMANUFACTURED", "REFURBISHED", "RECYCLED"};

constexpr std::array<const char*, 3> kDispositionNames = {"NONE", "SOLD_SECONDARY", "DONATED"};

constexpr std::array<const char*, 3> kResultNames = {"NA", "PASS", "FAIL"};

template <typename Enum, size_t N>
std::optional<Enum> lookup(const std::array<const char*, N>& names, const std::string& name) {
  for (size_t i = 0; i < N; ++i) {
    if (name == names[i]) return static_cast<Enum>(i);
  }
  return std::nullopt;
}
}  // namespace

const char* role_name(Role r) { return kRoleNames[static_cast<size_t>(r)]; }
const char* component_type_name(ComponentType t) { return kComponentNames[static_cast<size_t>(t)]; }
const char* event_type_name(EventType t) { return kEventNames[static_cast<size_t>(t)]; }
const char* device_state_name(DeviceState s) { return kStateNames[static_cast<size_t>(s)]; }
const char* classification_name(Classification c) {
  return kClassificationNames[static_cast<size_t>(c)];
}
const char* disposition_name(Disposition d) { return kDispositionNames[static_cast<size_t>(d)]; }
const char* event_result_name(EventResult r) { return kResultNames[static_cast<size_t>(r)]; }

std::optional<Role> role_from_name(const std::string& name) {
  return lookup<Role>(kRoleNames, name);
}
std::optional<ComponentType> component_type_from_name(const std::string& name) {
  return lookup<ComponentType>(kComponentNames, name);
}
std::optional<EventType> event_type_from_name(const std::string& name) {
  return lookup<EventType>(kEventNames, name);
}
std::optional<EventResult> event_result_from_name(const std::string& name) {
  return lookup<EventResult>(kResultNames, name);
}
std::optional<Classification> classification_from_name(const std::string& name) {
  return lookup<Classification>(kClassificationNames, name);
}

}  // namespace rlchain
