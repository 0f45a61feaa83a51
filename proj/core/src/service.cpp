#include "rlchain/service.hpp"

#include <httplib.h>
#include <json.hpp>

namespace rlchain {

using nlohmann::json;

namespace {

json error_body(const Error& err) {
  return json{{"error", error_name(err.code)}, {"detail", err.detail}};
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NOT_FOUND: return 404;
    case ErrorCode::PERMISSION_DENIED: return 403;
    case ErrorCode::ALREADY_EXISTS: return 409;
    case ErrorCode::TOO_LARGE: return 413;
    default: return 400;
  }
}

json event_to_json(const ProcessEvent& e) {
  return json{{"seq", e.seq},
              {"event_type", event_type_name(e.event_type)},
              {"device_serial", e.device_serial},
              {"actor", e.actor.hex()},
              {"counterparty", e.counterparty.is_zero() ? "" : e.counterparty.hex()},
              {"result", event_result_name(e.result)},
              {"detail_hash", e.detail_hash.hex()},
              {"block_height", e.block_height}};
}

json device_to_json(const DeviceRecord& d) {
  json components = json::array();
  for (const auto& c : d.components) {
    components.push_back({{"component_type", component_type_name(c.component_type)},
                          {"serial", c.serial},
                          {"feature_info_hash", c.feature_info_hash.hex()},
                          {"installed", c.installed}});
  }
  return json{{"serial", d.serial},
              {"model", d.model},
              {"original_manufacturer", d.original_manufacturer.hex()},
              {"state", device_state_name(d.state)},
              {"classification", classification_name(d.classification)},
              {"disposition", disposition_name(d.disposition)},
              {"custodian", d.custodian.hex()},
              {"event_count", d.event_count},
              {"components", components}};
}

}  // namespace

struct NodeService::Impl {
  httplib::Server server;
};

NodeService::NodeService(Node& node) : node_(node), impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->server;
  Node& n = node_;

  auto reply = [](httplib::Response& res, json body) {
    res.set_content(body.dump(), "application/json");
  };
  auto fail = [reply](httplib::Response& res, const Error& err) {
    res.status = http_status(err.code);
    reply(res, error_body(err));
  };

  svr.Get("/status", [&n, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, json{{"height", n.height()},
                    {"chain_id", n.chain_id()},
                    {"tip_hash", n.tip_hash().hex()},
                    {"state_digest", n.state_digest().hex()}});
  });

  svr.Post("/submit-transaction",
           [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
             auto body = json::parse(req.body, nullptr, false);
             if (body.is_discarded() || !body.contains("tx") || !body["tx"].is_string())
               return fail(res, {ErrorCode::SERIALIZATION_ERROR, "expected {\"tx\": hex}"});
             auto outcome = n.submit_hex(body["tx"].get<std::string>());
             if (!outcome) return fail(res, outcome.error());
             reply(res, json{{"status", outcome->accepted ? "accepted" : "rejected"},
                             {"tx_hash", outcome->tx_hash.hex()},
                             {"reason", outcome->reason},
                             {"height", n.height()}});
           });

  svr.Get("/block", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    uint64_t height = std::strtoull(req.get_param_value("height").c_str(), nullptr, 10);
    auto bytes = n.get_block_bytes(height);
    if (!bytes) return fail(res, bytes.error());
    reply(res, json{{"height", height}, {"block", to_hex(bytes.value())}});
  });

  svr.Get("/device-history",
          [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
            auto history = n.get_device_history(req.get_param_value("serial"));
            if (!history) return fail(res, history.error());
            json events = json::array();
            for (const auto& e : history.value()) events.push_back(event_to_json(e));
            reply(res, json{{"height", n.height()}, {"events", events}});
          });

  svr.Get("/device", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    auto device = n.get_device(req.get_param_value("serial"));
    if (!device) return fail(res, device.error());
    reply(res, json{{"height", n.height()}, {"device", device_to_json(device.value())}});
  });

  svr.Get("/device-compliance",
          [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
            auto report = n.device_compliance(req.get_param_value("serial"));
            if (!report) return fail(res, report.error());
            reply(res, json{{"height", n.height()},
                            {"report", json::parse(custody_report_json(report.value()))},
                            {"text", custody_report_text(report.value())}});
          });

  svr.Get("/stakeholder-stats",
          [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
            auto id = PublicKeyId::from_hex(req.get_param_value("id"));
            if (!id) return fail(res, {ErrorCode::SERIALIZATION_ERROR, "bad stakeholder id"});
            auto stats = n.get_stakeholder_stats(*id);
            if (!stats) return fail(res, stats.error());
            json counts;
            for (int i = 0; i < kEventTypeCount; ++i)
              counts[event_type_name(static_cast<EventType>(i))] = stats->event_counts[i];
            json anchor;
            if (stats->latest_anchor) {
              anchor = json{{"toc_length", stats->latest_anchor->toc_length},
                            {"toc_root", stats->latest_anchor->toc_root.hex()},
                            {"anchored_at", stats->latest_anchor->anchored_at}};
            }
            reply(res, json{{"height", n.height()},
                            {"event_counts", counts},
                            {"devices_handled", stats->devices_handled},
                            {"latest_anchor", anchor}});
          });

  svr.Get("/record", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    auto hash = Hash256::from_hex(req.get_param_value("hash"));
    if (!hash) return fail(res, {ErrorCode::SERIALIZATION_ERROR, "bad record hash"});
    auto bytes = n.get_record(*hash);
    if (!bytes) return fail(res, bytes.error());
    reply(res, json{{"height", n.height()}, {"bytes", to_hex(bytes.value())}});
  });

  svr.Post("/put-record", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    auto body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("bytes") || !body["bytes"].is_string())
      return fail(res, {ErrorCode::SERIALIZATION_ERROR, "expected {\"bytes\": hex}"});
    auto raw = from_hex(body["bytes"].get<std::string>());
    if (!raw) return fail(res, {ErrorCode::SERIALIZATION_ERROR, "malformed hex"});
    auto address = n.put_record(*raw);
    if (!address) return fail(res, address.error());
    reply(res, json{{"address", address->hex()}});
  });

  svr.Post("/toc-append", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    auto body = json::parse(req.body, nullptr, false);
    if (body.is_discarded())
      return fail(res, {ErrorCode::SERIALIZATION_ERROR, "malformed JSON body"});
    auto owner = PublicKeyId::from_hex(body.value("stakeholder", ""));
    auto content = Hash256::from_hex(body.value("content_hash", ""));
    auto sig_raw = from_hex(body.value("signature", ""));
    if (!owner || !content || !sig_raw || sig_raw->size() != 64 || !body.contains("key") ||
        !body.contains("index"))
      return fail(res, {ErrorCode::SERIALIZATION_ERROR, "missing or malformed fields"});
    Signature sig;
    std::copy(sig_raw->begin(), sig_raw->end(), sig.begin());
    auto entry = n.toc_append(*owner, body["key"].get<std::string>(), *content,
                              body["index"].get<uint64_t>(), sig);
    if (!entry) return fail(res, entry.error());
    reply(res, json{{"key", entry->key},
                    {"content_hash", entry->content_hash.hex()},
                    {"entry_hash", entry->entry_hash.hex()},
                    {"index", body["index"].get<uint64_t>()}});
  });

  svr.Get("/toc", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    auto owner = PublicKeyId::from_hex(req.get_param_value("stakeholder"));
    if (!owner) return fail(res, {ErrorCode::SERIALIZATION_ERROR, "bad stakeholder id"});
    auto entries = n.get_toc(*owner);
    if (!entries) return fail(res, entries.error());
    json list = json::array();
    for (const auto& e : entries.value())
      list.push_back({{"key", e.key},
                      {"content_hash", e.content_hash.hex()},
                      {"entry_hash", e.entry_hash.hex()}});
    reply(res, json{{"entries", list}});
  });

  svr.Get("/nonce", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    auto id = PublicKeyId::from_hex(req.get_param_value("id"));
    if (!id) return fail(res, {ErrorCode::SERIALIZATION_ERROR, "bad sender id"});
    reply(res, json{{"next_nonce", n.next_nonce_for(*id)}});
  });

  svr.Get("/tx", [&n, reply, fail](const httplib::Request& req, httplib::Response& res) {
    auto hash = Hash256::from_hex(req.get_param_value("hash"));
    if (!hash) return fail(res, {ErrorCode::SERIALIZATION_ERROR, "bad tx hash"});
    auto height = n.tx_commit_height(*hash);
    auto rejection = n.tx_rejection(*hash);
    reply(res, json{{"committed", height.has_value()},
                    {"height", height ? *height : 0},
                    {"rejected", rejection.has_value()},
                    {"reason", rejection ? *rejection : ""}});
  });

  svr.Get("/verify-chain", [&n, reply](const httplib::Request&, httplib::Response& res) {
    auto report = n.verify();
    json blocks = json::array();
    for (const auto& b : report.blocks)
      blocks.push_back({{"height", b.height}, {"ok", b.all_ok()}, {"notes", b.notes}});
    reply(res, json{{"height", n.height()}, {"ok", report.ok}, {"blocks", blocks}});
  });

  svr.Get("/audit", [&n, reply](const httplib::Request&, httplib::Response& res) {
    auto report = n.full_audit();
    reply(res, json{{"height", n.height()},
                    {"report", json::parse(system_report_json(report))},
                    {"text", system_report_text(report)}});
  });
}

NodeService::~NodeService() { stop(); }

Result<int> NodeService::start(const std::string& host, int port) {
  auto& svr = impl_->server;
  if (port == 0) {
    port_ = svr.bind_to_any_port(host);
    if (port_ < 0) return Error{ErrorCode::INVALID_ARGUMENT, "cannot bind to " + host};
  } else {
    if (!svr.bind_to_port(host, port))
      return Error{ErrorCode::INVALID_ARGUMENT,
                   "cannot bind to " + host + ":" + std::to_string(port)};
    port_ = port;
  }
  server_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void NodeService::stop() {
  if (impl_) impl_->server.stop();
  if (server_thread_.joinable()) server_thread_.join();
}

}  // namespace rlchain
