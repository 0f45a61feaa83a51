#include "rlchain/client.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

namespace rlchain {

using nlohmann::json;

struct NodeClient::Impl {
  httplib::Client http;
  Impl(const std::string& host, int port) : http(host, port) {
    http.set_connection_timeout(5);
    http.set_read_timeout(30);
  }
};

NodeClient::NodeClient(const std::string& host, int port)
    : impl_(std::make_unique<Impl>(host, port)) {}

NodeClient::~NodeClient() = default;

namespace {
Result<json> parse_response(const httplib::Result& res) {
  if (!res) return Error{ErrorCode::NOT_FOUND, "node not reachable"};
  auto body = json::parse(res->body, nullptr, false);
  if (body.is_discarded())
    return Error{ErrorCode::SERIALIZATION_ERROR, "node returned non-JSON response"};
  if (res->status >= 400) {
    return Error{ErrorCode::INVALID_ARGUMENT,
                 body.value("error", "HTTP " + std::to_string(res->status)) + ": " +
                     body.value("detail", "")};
  }
  return body;
}
}  // namespace

Result<json> NodeClient::get(const std::string& path) {
  return parse_response(impl_->http.Get(path));
}

Result<json> NodeClient::post(const std::string& path, const json& body) {
  return parse_response(impl_->http.Post(path, body.dump(), "application/json"));
}

Result<uint64_t> NodeClient::next_nonce(const PublicKeyId& sender) {
  auto res = get("/nonce?id=" + sender.hex());
  if (!res) return res.error();
  return res.value()["next_nonce"].get<uint64_t>();
}

Result<uint64_t> NodeClient::submit(const Transaction& tx, bool wait, int timeout_ms) {
  auto bytes = canonical_serialize(tx);
  if (!bytes) return bytes.error();
  auto res = post("/submit-transaction", json{{"tx", to_hex(bytes.value())}});
  if (!res) return res.error();
  if (res.value()["status"] != "accepted")
    return Error{ErrorCode::INVALID_ARGUMENT,
                 "rejected: " + res.value().value("reason", "unknown")};
  std::string hash = res.value()["tx_hash"].get<std::string>();
  if (!wait) return uint64_t{0};

  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  while (std::chrono::steady_clock::now() < deadline) {
    auto status = get("/tx?hash=" + hash);
    if (!status) return status.error();
    if (status.value()["committed"].get<bool>())
      return status.value()["height"].get<uint64_t>();
    if (status.value()["rejected"].get<bool>())
      return Error{ErrorCode::INVALID_ARGUMENT,
                   "rejected at sealing: " + status.value()["reason"].get<std::string>()};
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  return Error{ErrorCode::NOT_FOUND, "timed out waiting for commit"};
}

}  // namespace rlchain
