#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "rlchain/errors.hpp"
#include "rlchain/transaction.hpp"

namespace rlchain {

// Thin JSON client for the node's local-socket API.
class NodeClient {
 public:
  NodeClient(const std::string& host, int port);
  ~NodeClient();

  Result<nlohmann::json> get(const std::string& path);
  Result<nlohmann::json> post(const std::string& path, const nlohmann::json& body);

  Result<uint64_t> next_nonce(const PublicKeyId& sender);
  // Submits and, unless wait is false, polls until the transaction commits or
  // is rejected.
  Result<uint64_t> submit(const Transaction& tx, bool wait = true, int timeout_ms = 10000);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rlchain
