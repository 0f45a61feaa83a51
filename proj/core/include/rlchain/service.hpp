#pragma once

#include <memory>
#include <string>
#include <thread>

#include "rlchain/node.hpp"

namespace rlchain {

// Request/response API over a local socket. Query endpoints are
// unauthenticated; mutation happens only via signed transactions (and signed
// TOC appends). All responses carry the committed height they reflect.
class NodeService {
 public:
  explicit NodeService(Node& node);
  ~NodeService();

  // Binds and serves on a background thread. Port 0 picks a free port.
  Result<int> start(const std::string& host, int port);
  void stop();

  int port() const { return port_; }

 private:
  struct Impl;
  Node& node_;
  std::unique_ptr<Impl> impl_;
  std::thread server_thread_;
  int port_ = 0;
};

}  // namespace rlchain
