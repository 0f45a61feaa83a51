#include "rlchain/audit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rlchain {

const char* finding_code_name(FindingCode code) {
  switch (code) {
    case FindingCode::MISSING_WIPE: return "MISSING_WIPE";
    case FindingCode::BROKEN_CUSTODY: return "BROKEN_CUSTODY";
    case FindingCode::BAD_SIGNATURE: return "BAD_SIGNATURE";
    case FindingCode::UNANCHORED_RECORD: return "UNANCHORED_RECORD";
    case FindingCode::UNRESOLVABLE_RECORD: return "UNRESOLVABLE_RECORD";
    case FindingCode::LIFECYCLE_VIOLATION: return "LIFECYCLE_VIOLATION";
    case FindingCode::CLASSIFICATION_MISMATCH: return "CLASSIFICATION_MISMATCH";
  }
  return "UNKNOWN";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::COMPLIANT: return "COMPLIANT";
    case Verdict::NON_COMPLIANT: return "NON_COMPLIANT";
    case Verdict::INDETERMINATE: return "INDETERMINATE";
  }
  return "UNKNOWN";
}

bool SystemReport::zero_findings() const {
  if (!chain.ok) return false;
  for (const auto& d : devices) {
    if (d.verdict != Verdict::COMPLIANT || !d.findings.empty()) return false;
  }
  for (const auto& a : anchors) {
    if (!a.ok) return false;
  }
  return true;
}

namespace {

struct ScannedStakeholder {
  Role role = Role::CUSTOMER;
  bool active = true;
};

struct DeviceTx {
  Transaction tx;
  uint64_t height = 0;
};

struct DeviceOrigin {
  RegisterDevicePayload payload;
  PublicKeyId registrant;
  uint64_t height = 0;
  bool signature_ok = true;
};

// Everything the audit derives from the raw block stream alone.
struct ChainScan {
  std::map<std::array<uint8_t, 32>, ScannedStakeholder> stakeholders;
  std::map<std::array<uint8_t, 32>, TocAnchor> latest_anchor;
  std::map<std::string, DeviceOrigin> devices;
  std::map<std::string, std::vector<DeviceTx>> device_txs;
};

ChainScan scan_chain(const std::vector<Bytes>& raw_blocks, const GenesisConfig& genesis) {
  ChainScan scan;
  for (size_t i = 0; i < raw_blocks.size(); ++i) {
    auto decoded = decode_block(raw_blocks[i]);
    if (!decoded) continue;  // structural damage is reported by verify_chain
    for (const auto& tx : decoded->transactions) {
      bool sig_ok = verify_transaction_signature(tx, genesis.chain_id);
      if (const auto* reg = std::get_if<RegisterStakeholderPayload>(&tx.payload)) {
        if (sig_ok && genesis.is_registrar(tx.sender) &&
            !scan.stakeholders.contains(reg->candidate.bytes)) {
          scan.stakeholders[reg->candidate.bytes] = {reg->role, true};
        }
      } else if (const auto* dev = std::get_if<RegisterDevicePayload>(&tx.payload)) {
        if (!scan.devices.contains(dev->serial)) {
          scan.devices[dev->serial] = {*dev, tx.sender, i, sig_ok};
        }
      } else if (const auto* ev = std::get_if<RecordEventPayload>(&tx.payload)) {
        scan.device_txs[ev->device_serial].push_back({tx, i});
      } else if (const auto* cls = std::get_if<ClassifyDevicePayload>(&tx.payload)) {
        scan.device_txs[cls->device_serial].push_back({tx, i});
      } else if (const auto* anchor = std::get_if<AnchorTocPayload>(&tx.payload)) {
        if (!sig_ok || !scan.stakeholders.contains(tx.sender.bytes)) continue;
        auto it = scan.latest_anchor.find(tx.sender.bytes);
        uint64_t prev = it == scan.latest_anchor.end() ? 0 : it->second.toc_length;
        if (anchor->toc_length > prev) {
          scan.latest_anchor[tx.sender.bytes] =
              TocAnchor{tx.sender, anchor->toc_length, anchor->toc_root, i};
        }
      }
    }
  }
  return scan;
}

// Walker state for one device, advanced event by event exactly as recorded.
struct DeviceWalk {
  DeviceState state = DeviceState::REGISTERED;
  PublicKeyId custodian;
  PublicKeyId original_manufacturer;
  bool inspected = false;
  bool condition_analyzed = false;
  bool wiped = false;
  int64_t last_repair = -1;
  int64_t last_pass_test = -1;
  std::set<std::string> component_serials;
  Classification classification = Classification::NONE;
};

bool check_toc_membership(const PublicKeyId& actor, const Hash256& detail_hash,
                          const ChainScan& scan, const std::filesystem::path& toc_dir) {
  auto anchor_it = scan.latest_anchor.find(actor.bytes);
  if (anchor_it == scan.latest_anchor.end()) return false;
  const TocAnchor& anchor = anchor_it->second;
  auto toc = TocLog::open(toc_dir / (actor.hex() + ".log"));
  if (!toc) return false;
  if (anchor.toc_length > toc->length()) return false;
  for (uint64_t i = 0; i < anchor.toc_length; ++i) {
    if (toc->entries()[i].content_hash != detail_hash) continue;
    auto proof = toc->prove(i, anchor.toc_length);
    if (proof && verify_toc_membership(toc->entries()[i], proof.value(), anchor)) return true;
  }
  return false;
}

}  // namespace

Result<CustodyReport> reconstruct_custody(const std::string& serial,
                                          const std::vector<Bytes>& raw_blocks,
                                          const GenesisConfig& genesis, const ContentStore& cas,
                                          const std::filesystem::path& toc_dir) {
  ChainScan scan = scan_chain(raw_blocks, genesis);
  auto origin_it = scan.devices.find(serial);
  if (origin_it == scan.devices.end()) return Error{ErrorCode::NOT_FOUND, "unknown device"};
  const DeviceOrigin& origin = origin_it->second;

  CustodyReport report;
  report.device_serial = serial;

  auto add_finding = [&report](FindingCode code, uint64_t seq, std::string detail) {
    report.findings.push_back({code, seq, std::move(detail)});
  };

  if (!origin.signature_ok)
    add_finding(FindingCode::BAD_SIGNATURE, 0, "device registration signature invalid");

  DeviceWalk walk;
  walk.custodian = origin.registrant;
  walk.original_manufacturer = origin.payload.original_manufacturer;
  for (const auto& c : origin.payload.components) walk.component_serials.insert(c.serial);

  report.custody_timeline.push_back({walk.custodian, 0, 0});
  auto note_custodian = [&](const PublicKeyId& next, uint64_t seq) {
    if (next == walk.custodian) return;
    report.custody_timeline.back().to_seq = seq;
    report.custody_timeline.push_back({next, seq, seq});
    walk.custodian = next;
  };

  const auto txs_it = scan.device_txs.find(serial);
  const std::vector<DeviceTx> no_txs;
  const auto& txs = txs_it == scan.device_txs.end() ? no_txs : txs_it->second;

  for (uint64_t seq = 0; seq < txs.size(); ++seq) {
    const Transaction& tx = txs[seq].tx;
    EventCheck ec;
    ec.seq = seq;
    ec.actor = tx.sender;
    ec.block_height = txs[seq].height;

    const auto* ev = std::get_if<RecordEventPayload>(&tx.payload);
    const auto* cls = std::get_if<ClassifyDevicePayload>(&tx.payload);
    ec.event_type = ev ? ev->event_type : EventType::CLASSIFICATION;

    ec.signature_ok = verify_transaction_signature(tx, genesis.chain_id);
    if (!ec.signature_ok)
      add_finding(FindingCode::BAD_SIGNATURE, seq, "event signature does not verify");

    auto actor_it = scan.stakeholders.find(tx.sender.bytes);
    const ScannedStakeholder* actor =
        actor_it == scan.stakeholders.end() ? nullptr : &actor_it->second;
    ec.role_ok = actor && actor->active && role_permits_event(actor->role, ec.event_type);
    if (!ec.role_ok)
      add_finding(FindingCode::LIFECYCLE_VIOLATION, seq,
                  actor ? "role may not record this event type"
                        : "actor is not a registered stakeholder");

    ec.custody_ok = ec.event_type == EventType::COLLECTION || tx.sender == walk.custodian;
    if (!ec.custody_ok)
      add_finding(FindingCode::BROKEN_CUSTODY, seq, "actor did not hold custody");

    const Hash256 detail_hash = ev ? ev->detail_hash : cls->detail_hash;

    // Lifecycle rules, replayed against the recorded history.
    if (cls) {
      bool steps_ok = walk.inspected && walk.condition_analyzed && walk.wiped &&
                      walk.last_pass_test > walk.last_repair && walk.last_pass_test >= 0;
      bool class_ok = cls->classification == Classification::REMANUFACTURED ||
                      cls->classification == Classification::REFURBISHED;
      ec.lifecycle_ok = walk.state == DeviceState::IN_PROCESS && steps_ok && class_ok;
      if (!ec.lifecycle_ok)
        add_finding(FindingCode::LIFECYCLE_VIOLATION, seq,
                    "classification before mandatory steps completed");
      if (cls->classification == Classification::REMANUFACTURED &&
          tx.sender != walk.original_manufacturer) {
        ec.lifecycle_ok = false;
        add_finding(FindingCode::CLASSIFICATION_MISMATCH, seq,
                    "remanufactured by someone other than the original manufacturer");
      }
    } else {
      switch (ev->event_type) {
        case EventType::COLLECTION:
          ec.lifecycle_ok = walk.state == DeviceState::REGISTERED;
          break;
        case EventType::CUSTODY_TRANSFER: {
          auto target = scan.stakeholders.find(ev->counterparty.bytes);
          bool target_ok = target != scan.stakeholders.end() &&
                           target->second.role != Role::CUSTOMER &&
                           target->second.role != Role::GOVERNMENT;
          ec.lifecycle_ok = (walk.state == DeviceState::COLLECTED ||
                             walk.state == DeviceState::IN_TRANSIT) &&
                            target_ok;
          break;
        }
        case EventType::INSPECTION:
          ec.lifecycle_ok =
              walk.state == DeviceState::COLLECTED || walk.state == DeviceState::IN_PROCESS;
          break;
        case EventType::PHYSICAL_CONDITION_ANALYSIS:
        case EventType::DATA_WIPE:
        case EventType::CUSTOMIZATION_REMOVAL:
        case EventType::REPAIR:
          ec.lifecycle_ok = walk.state == DeviceState::IN_PROCESS && ev->result == EventResult::NA;
          break;
        case EventType::FUNCTIONAL_TEST:
          ec.lifecycle_ok = walk.state == DeviceState::IN_PROCESS &&
                            (ev->result == EventResult::PASS || ev->result == EventResult::FAIL);
          break;
        case EventType::COMPONENT_REPLACEMENT:
          ec.lifecycle_ok = walk.state == DeviceState::IN_PROCESS &&
                            ev->result == EventResult::NA && !ev->new_component_serial.empty() &&
                            !walk.component_serials.contains(ev->new_component_serial);
          break;
        case EventType::SALE:
        case EventType::DONATION:
          ec.lifecycle_ok = walk.state == DeviceState::PROCESSED;
          if (!walk.wiped) {
            ec.lifecycle_ok = false;
            add_finding(FindingCode::MISSING_WIPE, seq,
                        "device released without a recorded data wipe");
          }
          break;
        case EventType::CLASSIFICATION:
          ec.lifecycle_ok = false;  // bare CLASSIFICATION events are not a valid vehicle
          break;
      }
      bool is_release =
          ev->event_type == EventType::SALE || ev->event_type == EventType::DONATION;
      if (!ec.lifecycle_ok && !is_release) {
        add_finding(FindingCode::LIFECYCLE_VIOLATION, seq, "event violates the lifecycle machine");
      } else if (!ec.lifecycle_ok && is_release && walk.state != DeviceState::PROCESSED) {
        add_finding(FindingCode::LIFECYCLE_VIOLATION, seq, "release from a non-processed state");
      }
    }

    // Off-chain record: resolvable from the content store, and anchored by
    // the actor's committed TOC anchor.
    if (detail_hash.is_zero()) {
      ec.record_resolvable = false;
      ec.toc_membership_ok = false;
      add_finding(FindingCode::LIFECYCLE_VIOLATION, seq, "event carries no off-chain record hash");
    } else {
      auto record = cas.get(detail_hash);
      ec.record_resolvable = record.ok();
      if (!ec.record_resolvable)
        add_finding(FindingCode::UNRESOLVABLE_RECORD, seq,
                    record.code() == ErrorCode::INTEGRITY_FAILURE
                        ? "stored record fails its digest check"
                        : "record not present in any reachable store");
      ec.toc_membership_ok = check_toc_membership(tx.sender, detail_hash, scan, toc_dir);
      if (!ec.toc_membership_ok)
        add_finding(FindingCode::UNANCHORED_RECORD, seq,
                    "record hash is not covered by the actor's committed TOC anchor");
    }

    // Advance the walker along the recorded history, valid or not.
    if (cls) {
      walk.classification = cls->classification;
      walk.state = DeviceState::PROCESSED;
    } else {
      switch (ev->event_type) {
        case EventType::COLLECTION:
          walk.state = DeviceState::COLLECTED;
          note_custodian(tx.sender, seq);
          break;
        case EventType::CUSTODY_TRANSFER: {
          auto target = scan.stakeholders.find(ev->counterparty.bytes);
          walk.state = (target != scan.stakeholders.end() &&
                        target->second.role == Role::THIRD_PARTY_LOGISTICS)
                           ? DeviceState::IN_TRANSIT
                           : DeviceState::COLLECTED;
          note_custodian(ev->counterparty, seq);
          break;
        }
        case EventType::INSPECTION:
          walk.inspected = true;
          walk.state = DeviceState::IN_PROCESS;
          break;
        case EventType::PHYSICAL_CONDITION_ANALYSIS:
          walk.condition_analyzed = true;
          break;
        case EventType::DATA_WIPE:
          walk.wiped = true;
          break;
        case EventType::FUNCTIONAL_TEST:
          if (ev->result == EventResult::PASS) walk.last_pass_test = static_cast<int64_t>(seq);
          break;
        case EventType::REPAIR:
          walk.last_repair = static_cast<int64_t>(seq);
          break;
        case EventType::COMPONENT_REPLACEMENT:
          walk.last_repair = static_cast<int64_t>(seq);
          walk.component_serials.insert(ev->new_component_serial);
          break;
        case EventType::SALE:
        case EventType::DONATION:
          walk.state = DeviceState::FINALIZED;
          if (!ev->counterparty.is_zero()) note_custodian(ev->counterparty, seq);
          break;
        default:
          break;
      }
    }
    report.custody_timeline.back().to_seq = seq;
    report.events.push_back(ec);
  }

  bool hard_failure = false;
  bool soft_failure = false;
  for (const auto& f : report.findings) {
    if (f.code == FindingCode::UNRESOLVABLE_RECORD)
      soft_failure = true;
    else
      hard_failure = true;
  }
  report.verdict = hard_failure  ? Verdict::NON_COMPLIANT
                   : soft_failure ? Verdict::INDETERMINATE
                                  : Verdict::COMPLIANT;
  return report;
}

SystemReport verify_full(const std::vector<Bytes>& raw_blocks, const GenesisConfig& genesis,
                         const ContentStore& cas, const std::filesystem::path& toc_dir) {
  SystemReport report;
  report.chain = verify_chain(raw_blocks, genesis);

  ChainScan scan = scan_chain(raw_blocks, genesis);
  for (const auto& [serial, origin] : scan.devices) {
    auto custody = reconstruct_custody(serial, raw_blocks, genesis, cas, toc_dir);
    if (custody) report.devices.push_back(std::move(custody.value()));
  }
  for (const auto& [id, anchor] : scan.latest_anchor) {
    AnchorCheck check;
    check.stakeholder = anchor.stakeholder;
    auto toc = TocLog::open(toc_dir / (anchor.stakeholder.hex() + ".log"));
    if (!toc) {
      check.ok = false;
      check.detail = "TOC log unreadable";
    } else if (anchor.toc_length > toc->length()) {
      check.ok = false;
      check.detail = "TOC log shorter than the anchored length";
    } else {
      auto root = toc->root(anchor.toc_length);
      if (!root || root.value() != anchor.toc_root) {
        check.ok = false;
        check.detail = "TOC prefix root does not match the committed anchor";
      }
    }
    report.anchors.push_back(std::move(check));
  }
  return report;
}

namespace {

nlohmann::json custody_to_json(const CustodyReport& r) {
  nlohmann::json doc;
  doc["device_serial"] = r.device_serial;
  doc["verdict"] = verdict_name(r.verdict);
  doc["events"] = nlohmann::json::array();
  for (const auto& e : r.events) {
    doc["events"].push_back({{"seq", e.seq},
                             {"event_type", event_type_name(e.event_type)},
                             {"actor", e.actor.hex()},
                             {"block_height", e.block_height},
                             {"signature_ok", e.signature_ok},
                             {"role_ok", e.role_ok},
                             {"custody_ok", e.custody_ok},
                             {"lifecycle_ok", e.lifecycle_ok},
                             {"record_resolvable", e.record_resolvable},
                             {"toc_membership_ok", e.toc_membership_ok}});
  }
  doc["custody_timeline"] = nlohmann::json::array();
  for (const auto& span : r.custody_timeline) {
    doc["custody_timeline"].push_back(
        {{"custodian", span.custodian.hex()}, {"from_seq", span.from_seq}, {"to_seq", span.to_seq}});
  }
  doc["findings"] = nlohmann::json::array();
  for (const auto& f : r.findings) {
    doc["findings"].push_back(
        {{"code", finding_code_name(f.code)}, {"seq", f.seq}, {"detail", f.detail}});
  }
  return doc;
}

}  // namespace

std::string custody_report_json(const CustodyReport& report) {
  return custody_to_json(report).dump(2);
}

std::string custody_report_text(const CustodyReport& report) {
  std::ostringstream out;
  out << "device " << report.device_serial << "  verdict " << verdict_name(report.verdict) << "\n";
  out << "  seq  event                        actor     sig role cust life rec toc\n";
  for (const auto& e : report.events) {
    auto mark = [](bool b) { return b ? " ok " : "FAIL"; };
    out << "  " << e.seq << "    " << event_type_name(e.event_type) << "  "
        << e.actor.hex().substr(0, 8) << "  " << mark(e.signature_ok) << " " << mark(e.role_ok)
        << " " << mark(e.custody_ok) << " " << mark(e.lifecycle_ok) << " "
        << mark(e.record_resolvable) << " " << mark(e.toc_membership_ok) << "\n";
  }
  out << "  custody:";
  for (const auto& span : report.custody_timeline)
    out << " " << span.custodian.hex().substr(0, 8) << "[" << span.from_seq << ".." << span.to_seq
        << "]";
  out << "\n";
  for (const auto& f : report.findings)
    out << "  finding " << finding_code_name(f.code) << " seq " << f.seq << ": " << f.detail
        << "\n";
  return out.str();
}

std::string system_report_json(const SystemReport& report) {
  nlohmann::json doc;
  doc["chain_ok"] = report.chain.ok;
  doc["blocks"] = nlohmann::json::array();
  for (const auto& b : report.chain.blocks) {
    doc["blocks"].push_back({{"height", b.height}, {"ok", b.all_ok()}, {"notes", b.notes}});
  }
  doc["devices"] = nlohmann::json::array();
  for (const auto& d : report.devices) doc["devices"].push_back(custody_to_json(d));
  doc["anchors"] = nlohmann::json::array();
  for (const auto& a : report.anchors) {
    doc["anchors"].push_back(
        {{"stakeholder", a.stakeholder.hex()}, {"ok", a.ok}, {"detail", a.detail}});
  }
  doc["zero_findings"] = report.zero_findings();
  return doc.dump(2);
}

std::string system_report_text(const SystemReport& report) {
  std::ostringstream out;
  out << "chain verification: " << (report.chain.ok ? "ok" : "FAILED") << " ("
      << report.chain.blocks.size() << " blocks)\n";
  for (const auto& b : report.chain.blocks) {
    if (!b.all_ok()) {
      out << "  block " << b.height << ":";
      for (const auto& n : b.notes) out << " " << n << ";";
      out << "\n";
    }
  }
  for (const auto& d : report.devices) out << custody_report_text(d);
  for (const auto& a : report.anchors) {
    out << "anchor " << a.stakeholder.hex().substr(0, 8) << ": " << (a.ok ? "ok" : "FAILED");
    if (!a.detail.empty()) out << " (" << a.detail << ")";
    out << "\n";
  }
  out << "overall: " << (report.zero_findings() ? "zero findings" : "findings present") << "\n";
  return out.str();
}

}  // namespace rlchain
