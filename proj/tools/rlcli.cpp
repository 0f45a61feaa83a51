#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlchain/client.hpp"
#include "rlchain/keystore.hpp"
#include "rlchain/merkle.hpp"
#include "rlchain/node.hpp"

using nlohmann::json;
using namespace rlchain;

namespace {

// Exit codes mirror module error codes so scripts can branch on the reason.
int exit_code_for(const std::string& message) {
  static const std::pair<const char*, int> kCodes[] = {
      {"PERMISSION_DENIED", 10}, {"ALREADY_EXISTS", 11},     {"NOT_FOUND", 12},
      {"INVALID_BOM", 13},       {"INVALID_TRANSITION", 14}, {"MISSING_RECORD", 15},
      {"TOO_LARGE", 16},         {"INTEGRITY_FAILURE", 17},  {"NO_PROGRESS", 18},
      {"OUT_OF_RANGE", 19},      {"SERIALIZATION_ERROR", 20}, {"BAD_SIGNATURE", 21},
      {"BAD_NONCE", 22},
  };
  for (const auto& [name, code] : kCodes) {
    if (message.find(name) != std::string::npos) return code;
  }
  return 1;
}

[[noreturn]] void die(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(exit_code_for(message));
}

struct Ctx {
  std::string host = "127.0.0.1";
  int port = 8545;
  std::string keystore_dir;
  std::string key_name;
  bool json_output = false;
  bool no_wait = false;

  std::unique_ptr<NodeClient> client_;
  std::unique_ptr<Keystore> keystore_;

  NodeClient& client() {
    if (!client_) client_ = std::make_unique<NodeClient>(host, port);
    return *client_;
  }
  Keystore& keystore() {
    if (!keystore_) {
      std::string dir = keystore_dir;
      if (dir.empty()) {
        const char* home = std::getenv("HOME");
        dir = (home ? std::string(home) : ".") + "/.rlchain/keys";
      }
      keystore_ = std::make_unique<Keystore>(dir);
    }
    return *keystore_;
  }
  Keypair signing_key() {
    if (key_name.empty()) die("a signing key is required (--key <name>)");
    auto key = keystore().load(key_name);
    if (!key) die(key.error().detail);
    return key.value();
  }
  // Accepts a 64-char hex public key or a keystore entry name.
  PublicKeyId resolve_id(const std::string& ref) {
    if (auto id = PublicKeyId::from_hex(ref)) return *id;
    auto key = keystore().load(ref);
    if (!key) die("cannot resolve '" + ref + "' as a public key or keystore name");
    return key->pub;
  }
  uint64_t chain_id() {
    auto status = client().get("/status");
    if (!status) die(status.error().detail);
    return status.value()["chain_id"].get<uint64_t>();
  }
  uint64_t submit_tx(TxPayload payload, const Keypair& key) {
    auto nonce = client().next_nonce(key.pub);
    if (!nonce) die(nonce.error().detail);
    Transaction tx = sign_transaction(std::move(payload), nonce.value(), key, chain_id());
    auto height = client().submit(tx, !no_wait);
    if (!height) die(height.error().detail);
    return height.value();
  }
  Hash256 put_record_bytes(const Bytes& bytes) {
    auto res = client().post("/put-record", json{{"bytes", to_hex(bytes)}});
    if (!res) die(res.error().detail);
    auto hash = Hash256::from_hex(res.value()["address"].get<std::string>());
    if (!hash) die("node returned a malformed record address");
    return *hash;
  }
  void toc_append(const Keypair& key, const std::string& toc_key, const Hash256& content) {
    auto toc = client().get("/toc?stakeholder=" + key.pub.hex());
    if (!toc) die(toc.error().detail);
    uint64_t index = toc.value()["entries"].size();
    auto preimage = toc_append_preimage(key.pub, index, toc_key, content);
    Signature sig = sign(key, preimage);
    auto res = client().post("/toc-append", json{{"stakeholder", key.pub.hex()},
                                                 {"key", toc_key},
                                                 {"content_hash", content.hex()},
                                                 {"index", index},
                                                 {"signature", to_hex(sig)}});
    if (!res) die(res.error().detail);
  }
  // Stores a report file in the CAS and appends it to the signer's TOC in one
  // step; the returned address becomes the event's detail_hash.
  Hash256 attach_report(const Keypair& key, const std::string& path, const std::string& toc_key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die("cannot read report file: " + path);
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Hash256 address = put_record_bytes(bytes);
    toc_append(key, toc_key, address);
    return address;
  }
};

void print_events(const json& events) {
  for (const auto& e : events) {
    std::cout << "  " << e["seq"].get<uint64_t>() << "  "
              << e["event_type"].get<std::string>() << "  actor "
              << e["actor"].get<std::string>().substr(0, 8) << "  result "
              << e["result"].get<std::string>() << "  block " << e["block_height"].get<uint64_t>()
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rlcli - reverse-logistics ledger client"};
  app.require_subcommand(1);

  Ctx ctx;
  app.add_option("--node", ctx.host, "Node host")->capture_default_str();
  app.add_option("--port", ctx.port, "Node port")->capture_default_str();
  app.add_option("--keystore", ctx.keystore_dir, "Keystore directory (default ~/.rlchain/keys)");
  app.add_option("--key", ctx.key_name, "Signing key name in the keystore");
  app.add_flag("--json", ctx.json_output, "Machine-readable JSON output");
  app.add_flag("--no-wait", ctx.no_wait, "Do not wait for the transaction to commit");

  // keygen
  std::string gen_name;
  auto* keygen = app.add_subcommand("keygen", "Generate a named keypair");
  keygen->add_option("name", gen_name)->required();
  keygen->callback([&] {
    auto key = ctx.keystore().create(gen_name);
    if (!key) die(key.error().detail);
    if (ctx.json_output)
      std::cout << json{{"name", gen_name}, {"public_key", key->pub.hex()}}.dump() << "\n";
    else
      std::cout << gen_name << " " << key->pub.hex() << "\n";
  });

  // register-stakeholder
  std::string rs_candidate, rs_role, rs_display;
  auto* reg_stake = app.add_subcommand("register-stakeholder", "Register an RL actor (registrar)");
  reg_stake->add_option("--candidate", rs_candidate, "Public key hex or keystore name")->required();
  reg_stake->add_option("--role", rs_role, "CUSTOMER|RETAILER|MANUFACTURER|THIRD_PARTY_LOGISTICS|GOVERNMENT|REFURBISHER")->required();
  reg_stake->add_option("--name", rs_display, "Display name");
  reg_stake->callback([&] {
    auto role = role_from_name(rs_role);
    if (!role) die("unknown role: " + rs_role);
    RegisterStakeholderPayload p{ctx.resolve_id(rs_candidate), *role, rs_display};
    uint64_t h = ctx.submit_tx(p, ctx.signing_key());
    std::cout << "registered at height " << h << "\n";
  });

  // register-device
  std::string rd_serial, rd_model, rd_manufacturer;
  std::vector<std::string> rd_components;
  auto* reg_dev = app.add_subcommand("register-device", "Register a device with its six components");
  reg_dev->add_option("--serial", rd_serial)->required();
  reg_dev->add_option("--model", rd_model)->required();
  reg_dev->add_option("--manufacturer", rd_manufacturer, "Original manufacturer key")->required();
  reg_dev->add_option("--component", rd_components,
                      "TYPE=SERIAL[=FEATURE_HASH_HEX], one per component type")
      ->expected(-1);
  reg_dev->callback([&] {
    auto key = ctx.signing_key();
    RegisterDevicePayload p;
    p.serial = rd_serial;
    p.model = rd_model;
    p.original_manufacturer = ctx.resolve_id(rd_manufacturer);
    for (const auto& spec : rd_components) {
      auto eq1 = spec.find('=');
      if (eq1 == std::string::npos) die("component format is TYPE=SERIAL[=HASH]: " + spec);
      auto type = component_type_from_name(spec.substr(0, eq1));
      if (!type) die("unknown component type in: " + spec);
      auto rest = spec.substr(eq1 + 1);
      auto eq2 = rest.find('=');
      ComponentEntry entry;
      entry.type = *type;
      if (eq2 == std::string::npos) {
        entry.serial = rest;
        // No feature record supplied; store the serial itself so the hash
        // resolves, and index it in the signer's TOC.
        entry.feature_info_hash =
            ctx.put_record_bytes(Bytes(entry.serial.begin(), entry.serial.end()));
        ctx.toc_append(key, "feature/" + entry.serial, entry.feature_info_hash);
      } else {
        entry.serial = rest.substr(0, eq2);
        auto hash = Hash256::from_hex(rest.substr(eq2 + 1));
        if (!hash) die("malformed feature hash in: " + spec);
        entry.feature_info_hash = *hash;
      }
      p.components.push_back(std::move(entry));
    }
    uint64_t h = ctx.submit_tx(p, key);
    std::cout << "device " << rd_serial << " registered at height " << h << "\n";
  });

  // record-event (also backs transfer/sell/donate sugar)
  std::string ev_device, ev_type, ev_counterparty, ev_result = "NA", ev_report, ev_detail_hash,
              ev_toc_key, ev_component, ev_new_serial, ev_new_feature;
  auto add_event_opts = [&](CLI::App* cmd, bool with_type) {
    cmd->add_option("--device", ev_device)->required();
    if (with_type) cmd->add_option("--type", ev_type, "Event type")->required();
    cmd->add_option("--counterparty", ev_counterparty, "Transfer target, customer, or buyer");
    cmd->add_option("--result", ev_result, "NA|PASS|FAIL")->capture_default_str();
    cmd->add_option("--report", ev_report,
                    "Report file; stored in the CAS and TOC-appended automatically");
    cmd->add_option("--detail-hash", ev_detail_hash, "Use an existing record hash instead");
    cmd->add_option("--toc-key", ev_toc_key, "TOC key for the attached report");
    cmd->add_option("--component", ev_component, "COMPONENT_REPLACEMENT: component type");
    cmd->add_option("--new-serial", ev_new_serial, "COMPONENT_REPLACEMENT: new serial");
    cmd->add_option("--new-feature-hash", ev_new_feature,
                    "COMPONENT_REPLACEMENT: new feature record hash");
  };
  auto run_event = [&](EventType type) {
    auto key = ctx.signing_key();
    RecordEventPayload p;
    p.event_type = type;
    p.device_serial = ev_device;
    if (!ev_counterparty.empty()) p.counterparty = ctx.resolve_id(ev_counterparty);
    auto result = event_result_from_name(ev_result);
    if (!result) die("unknown result: " + ev_result);
    p.result = *result;
    if (!ev_detail_hash.empty()) {
      auto hash = Hash256::from_hex(ev_detail_hash);
      if (!hash) die("malformed detail hash");
      p.detail_hash = *hash;
    } else if (!ev_report.empty()) {
      std::string toc_key = ev_toc_key.empty()
                                ? std::string(event_type_name(type)) + "/" + ev_device
                                : ev_toc_key;
      p.detail_hash = ctx.attach_report(key, ev_report, toc_key);
    } else {
      die("every event needs an off-chain record: pass --report or --detail-hash");
    }
    if (!ev_component.empty()) {
      auto ct = component_type_from_name(ev_component);
      if (!ct) die("unknown component type: " + ev_component);
      p.component_type = *ct;
      p.new_component_serial = ev_new_serial;
      if (!ev_new_feature.empty()) {
        auto hash = Hash256::from_hex(ev_new_feature);
        if (!hash) die("malformed new feature hash");
        p.new_component_feature_hash = *hash;
      } else if (!ev_new_serial.empty()) {
        p.new_component_feature_hash =
            ctx.put_record_bytes(Bytes(ev_new_serial.begin(), ev_new_serial.end()));
        ctx.toc_append(key, "feature/" + ev_new_serial, p.new_component_feature_hash);
      }
    }
    uint64_t h = ctx.submit_tx(p, key);
    std::cout << event_type_name(type) << " recorded at height " << h << "\n";
  };

  auto* record = app.add_subcommand("record-event", "Record a process event on a device");
  add_event_opts(record, true);
  record->callback([&] {
    auto type = event_type_from_name(ev_type);
    if (!type) die("unknown event type: " + ev_type);
    run_event(*type);
  });

  auto* transfer = app.add_subcommand("transfer", "Transfer custody (--counterparty target)");
  add_event_opts(transfer, false);
  transfer->callback([&] { run_event(EventType::CUSTODY_TRANSFER); });

  auto* sell = app.add_subcommand("sell", "Sell a processed device to the secondary market");
  add_event_opts(sell, false);
  sell->callback([&] { run_event(EventType::SALE); });

  auto* donate = app.add_subcommand("donate", "Donate a processed device");
  add_event_opts(donate, false);
  donate->callback([&] { run_event(EventType::DONATION); });

  // classify
  std::string cl_device, cl_class, cl_report, cl_detail_hash;
  auto* classify = app.add_subcommand("classify", "Classify a processed device");
  classify->add_option("--device", cl_device)->required();
  classify->add_option("--class", cl_class, "REMANUFACTURED|REFURBISHED")->required();
  classify->add_option("--report", cl_report);
  classify->add_option("--detail-hash", cl_detail_hash);
  classify->callback([&] {
    auto key = ctx.signing_key();
    auto cls = classification_from_name(cl_class);
    if (!cls) die("unknown classification: " + cl_class);
    ClassifyDevicePayload p;
    p.device_serial = cl_device;
    p.classification = *cls;
    if (!cl_detail_hash.empty()) {
      auto hash = Hash256::from_hex(cl_detail_hash);
      if (!hash) die("malformed detail hash");
      p.detail_hash = *hash;
    } else if (!cl_report.empty()) {
      p.detail_hash = ctx.attach_report(key, cl_report, "CLASSIFICATION/" + cl_device);
    } else {
      die("classification needs an off-chain record: pass --report or --detail-hash");
    }
    uint64_t h = ctx.submit_tx(p, key);
    std::cout << "classified " << cl_class << " at height " << h << "\n";
  });

  // anchor-toc
  auto* anchor = app.add_subcommand("anchor-toc", "Commit the current TOC root on-chain");
  anchor->callback([&] {
    auto key = ctx.signing_key();
    auto toc = ctx.client().get("/toc?stakeholder=" + key.pub.hex());
    if (!toc) die(toc.error().detail);
    std::vector<Hash256> hashes;
    for (const auto& e : toc.value()["entries"]) {
      auto h = Hash256::from_hex(e["entry_hash"].get<std::string>());
      if (!h) die("node returned a malformed entry hash");
      hashes.push_back(*h);
    }
    AnchorTocPayload p;
    p.toc_length = hashes.size();
    p.toc_root = merkle_root(hashes);
    uint64_t h = ctx.submit_tx(p, key);
    std::cout << "anchored " << p.toc_length << " entries at height " << h << "\n";
  });

  // trace
  std::string tr_serial;
  auto* trace = app.add_subcommand("trace", "Show a device's committed history");
  trace->add_option("serial", tr_serial)->required();
  trace->callback([&] {
    auto device = ctx.client().get("/device?serial=" + tr_serial);
    if (!device) die(device.error().detail);
    auto history = ctx.client().get("/device-history?serial=" + tr_serial);
    if (!history) die(history.error().detail);
    if (ctx.json_output) {
      std::cout << json{{"device", device.value()["device"]},
                        {"events", history.value()["events"]}}
                       .dump(2)
                << "\n";
      return;
    }
    const auto& d = device.value()["device"];
    std::cout << "device " << d["serial"].get<std::string>() << " model "
              << d["model"].get<std::string>() << " state " << d["state"].get<std::string>()
              << " classification " << d["classification"].get<std::string>() << "\n";
    print_events(history.value()["events"]);
  });

  // audit
  std::string au_serial;
  bool au_all = false;
  auto* audit = app.add_subcommand("audit", "Audit a device (or --all) from raw blocks");
  audit->add_option("serial", au_serial);
  audit->add_flag("--all", au_all, "Full system audit");
  audit->callback([&] {
    if (au_all) {
      auto report = ctx.client().get("/audit");
      if (!report) die(report.error().detail);
      if (ctx.json_output)
        std::cout << report.value()["report"].dump(2) << "\n";
      else
        std::cout << report.value()["text"].get<std::string>();
      if (!report.value()["report"]["zero_findings"].get<bool>()) std::exit(3);
      return;
    }
    if (au_serial.empty()) die("pass a device serial or --all");
    auto report = ctx.client().get("/device-compliance?serial=" + au_serial);
    if (!report) die(report.error().detail);
    if (ctx.json_output)
      std::cout << report.value()["report"].dump(2) << "\n";
    else
      std::cout << report.value()["text"].get<std::string>();
    if (report.value()["report"]["verdict"].get<std::string>() != "COMPLIANT") std::exit(3);
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Verify the whole chain structurally");
  verify->callback([&] {
    auto report = ctx.client().get("/verify-chain");
    if (!report) die(report.error().detail);
    if (ctx.json_output)
      std::cout << report.value().dump(2) << "\n";
    else
      std::cout << "chain " << (report.value()["ok"].get<bool>() ? "ok" : "FAILED") << " ("
                << report.value()["blocks"].size() << " blocks)\n";
    if (!report.value()["ok"].get<bool>()) std::exit(3);
  });

  // stats
  std::string st_id;
  auto* stats = app.add_subcommand("stats", "Per-stakeholder statistics");
  stats->add_option("stakeholder", st_id, "Public key hex or keystore name")->required();
  stats->callback([&] {
    auto res = ctx.client().get("/stakeholder-stats?id=" + ctx.resolve_id(st_id).hex());
    if (!res) die(res.error().detail);
    if (ctx.json_output) {
      std::cout << res.value().dump(2) << "\n";
      return;
    }
    std::cout << "devices handled: " << res.value()["devices_handled"].get<uint64_t>() << "\n";
    for (const auto& [name, count] : res.value()["event_counts"].items()) {
      if (count.get<uint64_t>() > 0) std::cout << "  " << name << ": " << count << "\n";
    }
    if (!res.value()["latest_anchor"].is_null())
      std::cout << "latest anchor: length "
                << res.value()["latest_anchor"]["toc_length"].get<uint64_t>() << " root "
                << res.value()["latest_anchor"]["toc_root"].get<std::string>() << "\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
