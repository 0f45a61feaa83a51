#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rlchain {

enum class Role : uint8_t {
  CUSTOMER = 0,
  RETAILER = 1,
  MANUFACTURER = 2,
  THIRD_PARTY_LOGISTICS = 3,
  GOVERNMENT = 4,
  REFURBISHER = 5,
};
inline constexpr int kRoleCount = 6;

enum class ComponentType : uint8_t {
  CPU = 0,
  CAMERA = 1,
  BATTERY = 2,
  DISPLAY = 3,
  INTERNAL_MEMORY = 4,
  MOTHERBOARD = 5,
};
inline constexpr int kComponentTypeCount = 6;

enum class EventType : uint8_t {
  COLLECTION = 0,
  CUSTODY_TRANSFER = 1,
  INSPECTION = 2,
  PHYSICAL_CONDITION_ANALYSIS = 3,
  DATA_WIPE = 4,
  FUNCTIONAL_TEST = 5,
  CUSTOMIZATION_REMOVAL = 6,
  REPAIR = 7,
  COMPONENT_REPLACEMENT = 8,
  CLASSIFICATION = 9,
  SALE = 10,
  DONATION = 11,
};
inline constexpr int kEventTypeCount = 12;

enum class DeviceState : uint8_t {
  REGISTERED = 0,
  COLLECTED = 1,
  IN_TRANSIT = 2,
  IN_PROCESS = 3,
  PROCESSED = 4,
  FINALIZED = 5,
};

enum class Classification : uint8_t {
  NONE = 0,
  REMANUFACTURED = 1,
  REFURBISHED = 2,
  // Reserved for the recycling path; every transition into it is rejected.
  RECYCLED = 3,
};

enum class Disposition : uint8_t {
  NONE = 0,
  SOLD_SECONDARY = 1,
  DONATED = 2,
};

enum class EventResult : uint8_t {
  NA = 0,
  PASS = 1,
  FAIL = 2,
};

const char* role_name(Role r);
const char* component_type_name(ComponentType t);
const char* event_type_name(EventType t);
const char* device_state_name(DeviceState s);
const char* classification_name(Classification c);
const char* disposition_name(Disposition d);
const char* event_result_name(EventResult r);

std::optional<Role> role_from_name(const std::string& name);
std::optional<ComponentType> component_type_from_name(const std::string& name);
std::optional<EventType> event_type_from_name(const std::string& name);
std::optional<EventResult> event_result_from_name(const std::string& name);
std::optional<Classification> classification_from_name(const std::string& name);

}  // namespace rlchain
