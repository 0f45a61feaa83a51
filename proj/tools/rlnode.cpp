#include <atomic>
#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "rlchain/keystore.hpp"
#include "rlchain/service.hpp"

namespace {
std::atomic<bool> g_shutdown{false};
void handle_signal(int) { g_shutdown = true; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rlnode - reverse-logistics ledger node"};

  std::string listen = "127.0.0.1";
  int port = 8545;
  std::string data_dir = "rlnode-data";
  std::string genesis_path;
  std::string key_file;
  int seal_interval_ms = 500;
  bool allow_empty = false;

  app.add_option("--listen", listen, "Listen address")->capture_default_str();
  app.add_option("--port", port, "Listen port")->capture_default_str();
  app.add_option("--data-dir", data_dir, "Data directory")->capture_default_str();
  app.add_option("--genesis", genesis_path, "Genesis config file (JSON)")->required();
  app.add_option("--validator-key", key_file,
                 "Key file with the validator secret (omit for a query-only node)");
  app.add_option("--seal-interval", seal_interval_ms, "Seal interval in ms")
      ->capture_default_str();
  app.add_flag("--allow-empty-blocks", allow_empty, "Seal blocks even with no transactions");

  CLI11_PARSE(app, argc, argv);

  auto genesis = rlchain::GenesisConfig::load(genesis_path);
  if (!genesis) {
    std::cerr << "error: " << genesis.error().detail << "\n";
    return 1;
  }

  rlchain::NodeConfig config;
  config.data_dir = data_dir;
  config.genesis = genesis.value();
  config.seal_interval = std::chrono::milliseconds(seal_interval_ms);
  config.allow_empty_blocks = allow_empty;

  if (!key_file.empty()) {
    std::filesystem::path path(key_file);
    rlchain::Keystore store(path.parent_path().empty() ? "." : path.parent_path().string());
    auto key = store.load(path.stem().string());
    if (!key) {
      std::cerr << "error: " << key.error().detail << "\n";
      return 1;
    }
    config.validator_key = key.value();
  }

  auto node = rlchain::Node::open(std::move(config));
  if (!node) {
    std::cerr << "refusing to start: " << node.error().detail << "\n";
    return 1;
  }

  rlchain::NodeService service(*node.value());
  auto bound = service.start(listen, port);
  if (!bound) {
    std::cerr << "error: " << bound.error().detail << "\n";
    return 1;
  }
  node.value()->start_sealing();

  std::cout << "rlnode listening on " << listen << ":" << bound.value() << " height "
            << node.value()->height() << (key_file.empty() ? " (query-only)" : " (validator)")
            << std::endl;

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_shutdown) std::this_thread::sleep_for(std::chrono::milliseconds(100));

  std::cout << "shutting down\n";
  service.stop();
  node.value()->stop();
  return 0;
}
