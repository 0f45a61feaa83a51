#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rlchain/cas.hpp"
#include "rlchain/ledger.hpp"
#include "rlchain/toc.hpp"

namespace rlchain {

enum class FindingCode {
  MISSING_WIPE,
  BROKEN_CUSTODY,
  BAD_SIGNATURE,
  UNANCHORED_RECORD,
  UNRESOLVABLE_RECORD,
  LIFECYCLE_VIOLATION,
  CLASSIFICATION_MISMATCH,
};

const char* finding_code_name(FindingCode code);

struct Finding {
  FindingCode code;
  uint64_t seq = 0;
  std::string detail;
};

enum class Verdict { COMPLIANT, NON_COMPLIANT, INDETERMINATE };

const char* verdict_name(Verdict v);

struct EventCheck {
  uint64_t seq = 0;
  EventType event_type = EventType::COLLECTION;
  PublicKeyId actor;
  uint64_t block_height = 0;
  bool signature_ok = true;
  bool role_ok = true;
  bool custody_ok = true;
  bool lifecycle_ok = true;
  bool record_resolvable = true;
  bool toc_membership_ok = true;
};

struct CustodySpan {
  PublicKeyId custodian;
  uint64_t from_seq = 0;
  uint64_t to_seq = 0;  // inclusive
};

struct CustodyReport {
  std::string device_serial;
  std::vector<EventCheck> events;
  std::vector<CustodySpan> custody_timeline;
  Verdict verdict = Verdict::COMPLIANT;
  std::vector<Finding> findings;
};

struct AnchorCheck {
  PublicKeyId stakeholder;
  bool ok = true;
  std::string detail;
};

struct SystemReport {
  ChainReport chain;
  std::vector<CustodyReport> devices;
  std::vector<AnchorCheck> anchors;

  bool zero_findings() const;
};

// Everything below recomputes from raw blocks and the content/TOC stores;
// it never consults a node's materialized registry state.

Result<CustodyReport> reconstruct_custody(const std::string& serial,
                                          const std::vector<Bytes>& raw_blocks,
                                          const GenesisConfig& genesis, const ContentStore& cas,
                                          const std::filesystem::path& toc_dir);

SystemReport verify_full(const std::vector<Bytes>& raw_blocks, const GenesisConfig& genesis,
                         const ContentStore& cas, const std::filesystem::path& toc_dir);

std::string custody_report_json(const CustodyReport& report);
std::string custody_report_text(const CustodyReport& report);
std::string system_report_json(const SystemReport& report);
std::string system_report_text(const SystemReport& report);

}  // namespace rlchain
