#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "rlchain/client.hpp"
#include "rlchain/service.hpp"
#include "helpers.hpp"

using namespace rlchain;
using namespace rltest;
using nlohmann::json;

namespace {

// A single-validator chain so one node seals every height.
struct NodeFixture {
  Actors actors;
  TempDir dir{"rlnode-test"};
  GenesisConfig genesis;
  std::unique_ptr<Node> node;
  std::unique_ptr<NodeService> service;
  std::unique_ptr<NodeClient> client;

  explicit NodeFixture(bool background_sealing = false) {
    genesis.chain_id = 21;
    genesis.validators = {actors.validator_a.pub};
    genesis.registrars = {actors.registrar.pub};

    NodeConfig config;
    config.data_dir = dir.path / "node";
    config.genesis = genesis;
    config.validator_key = actors.validator_a;
    config.seal_interval = std::chrono::milliseconds(25);
    auto opened = Node::open(config);
    REQUIRE(opened);
    node = std::move(opened.value());
    if (background_sealing) node->start_sealing();

    service = std::make_unique<NodeService>(*node);
    auto port = service->start("127.0.0.1", 0);
    REQUIRE(port);
    client = std::make_unique<NodeClient>("127.0.0.1", port.value());
  }

  ~NodeFixture() {
    service->stop();
    node->stop();
  }

  Transaction make_tx(const Keypair& key, TxPayload payload) {
    return sign_transaction(std::move(payload), node->next_nonce_for(key.pub), key,
                            genesis.chain_id);
  }

  // Submit and seal synchronously (no background sealer in most tests).
  void commit(const Keypair& key, TxPayload payload) {
    auto tx = make_tx(key, std::move(payload));
    auto outcome = node->submit(tx);
    REQUIRE(outcome.accepted);
    REQUIRE(node->seal_once());
    auto height = node->tx_commit_height(outcome.tx_hash);
    REQUIRE(height.has_value());
  }

  Hash256 attach(const Keypair& actor, const std::string& key, const std::string& body) {
    Bytes bytes(body.begin(), body.end());
    Hash256 address = node->put_record(bytes).value();
    auto toc = node->get_toc(actor.pub).value();
    auto preimage = toc_append_preimage(actor.pub, toc.size(), key, address);
    auto entry = node->toc_append(actor.pub, key, address, toc.size(), sign(actor, preimage));
    REQUIRE(entry);
    return address;
  }
};

}  // namespace

TEST_CASE("status and basic queries over the socket") {
  NodeFixture fx;
  auto status = fx.client->get("/status");
  REQUIRE(status);
  CHECK(status.value()["height"] == 0);
  CHECK(status.value()["chain_id"] == 21);
  CHECK(status.value()["tip_hash"].get<std::string>().size() == 64);

  CHECK(!fx.client->get("/device?serial=NOPE"));
  CHECK(!fx.client->get("/stakeholder-stats?id=zz"));
  CHECK(fx.client->get("/block?height=0"));
  CHECK(!fx.client->get("/block?height=5"));
}

TEST_CASE("submit over the socket, commit, and read back") {
  NodeFixture fx(/*background_sealing=*/true);
  const Actors& a = fx.actors;

  auto submit = [&](const Keypair& key, TxPayload payload) {
    auto nonce = fx.client->next_nonce(key.pub);
    REQUIRE(nonce);
    auto tx = sign_transaction(std::move(payload), nonce.value(), key, fx.genesis.chain_id);
    return fx.client->submit(tx, true, 5000);
  };

  REQUIRE(submit(a.registrar,
                 RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "Shop"}));
  REQUIRE(submit(a.registrar,
                 RegisterStakeholderPayload{a.manufacturer.pub, Role::MANUFACTURER, "Maker"}));

  RegisterDevicePayload dev;
  dev.serial = "NET-1";
  dev.model = "PX";
  dev.original_manufacturer = a.manufacturer.pub;
  for (int i = 0; i < kComponentTypeCount; ++i)
    dev.components.push_back({static_cast<ComponentType>(i), "c" + std::to_string(i),
                              test_hash256(1)});
  REQUIRE(submit(a.manufacturer, dev));

  Hash256 intake = fx.attach(a.retailer, "COLLECTION/NET-1", "intake sheet");
  RecordEventPayload ev;
  ev.event_type = EventType::COLLECTION;
  ev.device_serial = "NET-1";
  ev.detail_hash = intake;
  REQUIRE(submit(a.retailer, ev));

  auto device = fx.client->get("/device?serial=NET-1");
  REQUIRE(device);
  CHECK(device.value()["device"]["state"] == "COLLECTED");
  CHECK(device.value()["device"]["custodian"] == a.retailer.pub.hex());

  auto history = fx.client->get("/device-history?serial=NET-1");
  REQUIRE(history);
  REQUIRE(history.value()["events"].size() == 1);
  CHECK(history.value()["events"][0]["event_type"] == "COLLECTION");
  CHECK(history.value()["events"][0]["detail_hash"] == intake.hex());

  auto record = fx.client->get("/record?hash=" + intake.hex());
  REQUIRE(record);
  CHECK(from_hex(record.value()["bytes"].get<std::string>()).value() ==
        Bytes{'i', 'n', 't', 'a', 'k', 'e', ' ', 's', 'h', 'e', 'e', 't'});

  auto stats = fx.client->get("/stakeholder-stats?id=" + a.retailer.pub.hex());
  REQUIRE(stats);
  CHECK(stats.value()["devices_handled"] == 1);
  CHECK(stats.value()["event_counts"]["COLLECTION"] == 1);

  auto verify = fx.client->get("/verify-chain");
  REQUIRE(verify);
  CHECK(verify.value()["ok"] == true);
}

TEST_CASE("contract-invalid transactions report a coded rejection") {
  NodeFixture fx(/*background_sealing=*/true);
  const Actors& a = fx.actors;
  // Outsider is no registrar: accepted into the queue, rejected at sealing.
  auto tx = fx.make_tx(a.outsider,
                       RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "Shop"});
  auto result = fx.client->submit(tx, true, 5000);
  REQUIRE(!result);
  CHECK(result.error().detail.find("PERMISSION_DENIED") != std::string::npos);
}

TEST_CASE("malformed submissions are refused at the door") {
  NodeFixture fx;
  auto bad_hex = fx.client->post("/submit-transaction", json{{"tx", "zz"}});
  CHECK(!bad_hex);
  auto bad_body = fx.client->post("/submit-transaction", json{{"nope", 1}});
  CHECK(!bad_body);
  auto bad_bytes = fx.client->post("/submit-transaction", json{{"tx", "00ff"}});
  CHECK(!bad_bytes);

  // Bad signature is rejected immediately, not queued.
  auto tx = fx.make_tx(fx.actors.registrar,
                       RegisterStakeholderPayload{fx.actors.retailer.pub, Role::RETAILER, "S"});
  tx.signature[0] ^= 1;
  auto outcome = fx.node->submit(tx);
  CHECK(!outcome.accepted);
  CHECK(outcome.reason.find("signature") != std::string::npos);

  // Duplicate nonce cannot sit in the queue twice.
  auto good = fx.make_tx(fx.actors.registrar,
                         RegisterStakeholderPayload{fx.actors.retailer.pub, Role::RETAILER, "S"});
  CHECK(fx.node->submit(good).accepted);
  CHECK(!fx.node->submit(good).accepted);
}

TEST_CASE("toc append is owner-signed and ordered") {
  NodeFixture fx;
  const Actors& a = fx.actors;
  Bytes body{'r', 'e', 'p'};
  Hash256 address = fx.node->put_record(body).value();

  auto preimage = toc_append_preimage(a.retailer.pub, 0, "k", address);
  // Signed by someone else: refused.
  CHECK(fx.node->toc_append(a.retailer.pub, "k", address, 0, sign(a.outsider, preimage)).code() ==
        ErrorCode::PERMISSION_DENIED);
  // Content must exist in the store.
  auto missing_pre = toc_append_preimage(a.retailer.pub, 0, "k", test_hash256(9));
  CHECK(fx.node->toc_append(a.retailer.pub, "k", test_hash256(9), 0,
                            sign(a.retailer, missing_pre))
            .code() == ErrorCode::NOT_FOUND);
  // Wrong index: refused.
  auto wrong_pre = toc_append_preimage(a.retailer.pub, 3, "k", address);
  CHECK(fx.node->toc_append(a.retailer.pub, "k", address, 3, sign(a.retailer, wrong_pre)).code() ==
        ErrorCode::OUT_OF_RANGE);
  // Correct append works and is visible over the socket.
  CHECK(fx.node->toc_append(a.retailer.pub, "k", address, 0, sign(a.retailer, preimage)));
  auto toc = fx.client->get("/toc?stakeholder=" + a.retailer.pub.hex());
  REQUIRE(toc);
  REQUIRE(toc.value()["entries"].size() == 1);
  CHECK(toc.value()["entries"][0]["key"] == "k");
  CHECK(toc.value()["entries"][0]["content_hash"] == address.hex());
}

TEST_CASE("restart replays the chain to the same state") {
  Actors actors;
  TempDir dir("rlnode-restart");
  GenesisConfig genesis;
  genesis.chain_id = 21;
  genesis.validators = {actors.validator_a.pub};
  genesis.registrars = {actors.registrar.pub};
  NodeConfig config;
  config.data_dir = dir.path / "node";
  config.genesis = genesis;
  config.validator_key = actors.validator_a;

  Hash256 digest, tip;
  uint64_t height;
  {
    auto node = Node::open(config);
    REQUIRE(node);
    auto tx = sign_transaction(
        RegisterStakeholderPayload{actors.retailer.pub, Role::RETAILER, "Shop"}, 1,
        actors.registrar, genesis.chain_id);
    REQUIRE(node.value()->submit(tx).accepted);
    REQUIRE(node.value()->seal_once());
    digest = node.value()->state_digest();
    tip = node.value()->tip_hash();
    height = node.value()->height();
    node.value()->stop();
  }

  auto reopened = Node::open(config);
  REQUIRE(reopened);
  CHECK(reopened.value()->height() == height);
  CHECK(reopened.value()->state_digest() == digest);
  CHECK(reopened.value()->tip_hash() == tip);
  // Committed tx index survives the replay.
  auto tx = sign_transaction(
      RegisterStakeholderPayload{actors.retailer.pub, Role::RETAILER, "Shop"}, 1,
      actors.registrar, genesis.chain_id);
  CHECK(reopened.value()->tx_commit_height(tx_hash(tx).value()).has_value());
  reopened.value()->stop();
}

TEST_CASE("a corrupted block log refuses to start") {
  Actors actors;
  TempDir dir("rlnode-corrupt");
  GenesisConfig genesis;
  genesis.chain_id = 21;
  genesis.validators = {actors.validator_a.pub};
  genesis.registrars = {actors.registrar.pub};
  NodeConfig config;
  config.data_dir = dir.path / "node";
  config.genesis = genesis;
  config.validator_key = actors.validator_a;

  {
    auto node = Node::open(config);
    REQUIRE(node);
    auto tx = sign_transaction(
        RegisterStakeholderPayload{actors.retailer.pub, Role::RETAILER, "Shop"}, 1,
        actors.registrar, genesis.chain_id);
    REQUIRE(node.value()->submit(tx).accepted);
    REQUIRE(node.value()->seal_once());
    node.value()->stop();
  }

  // Flip a byte near the end of the log (inside the sealed block).
  auto log = config.data_dir / "blocks.log";
  auto size = std::filesystem::file_size(log);
  std::fstream f(log, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(static_cast<std::streamoff>(size - 40));
  int c = f.get();
  f.seekp(static_cast<std::streamoff>(size - 40));
  f.put(static_cast<char>(c ^ 0x01));
  f.close();

  auto reopened = Node::open(config);
  REQUIRE(!reopened);
  CHECK(reopened.code() == ErrorCode::INTEGRITY_FAILURE);
  CHECK(reopened.error().detail.find("block 1") != std::string::npos);
}
