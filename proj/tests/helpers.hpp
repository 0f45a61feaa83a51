#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rlchain/cas.hpp"
#include "rlchain/ledger.hpp"
#include "rlchain/toc.hpp"

namespace rltest {

using namespace rlchain;

inline Keypair test_key(uint8_t tag) {
  std::array<uint8_t, 32> seed{};
  seed.fill(tag);
  return Keypair::from_seed(seed);
}

inline Hash256 test_hash256(uint8_t tag) {
  Hash256 h;
  h.bytes.fill(tag);
  return h;
}

struct Actors {
  Keypair validator_a = test_key(0xA1);
  Keypair validator_b = test_key(0xA2);
  Keypair validator_c = test_key(0xA3);
  Keypair registrar = test_key(0xB1);
  Keypair retailer = test_key(0xC1);
  Keypair logistics = test_key(0xC2);
  Keypair manufacturer = test_key(0xC3);
  Keypair refurbisher = test_key(0xC4);
  Keypair customer = test_key(0xC5);
  Keypair government = test_key(0xC6);
  Keypair outsider = test_key(0xC7);  // never registered
};

inline GenesisConfig test_genesis(const Actors& a, uint64_t chain_id = 7) {
  GenesisConfig g;
  g.chain_id = chain_id;
  g.validators = {a.validator_a.pub, a.validator_b.pub, a.validator_c.pub};
  g.registrars = {a.registrar.pub};
  return g;
}

// Drives a ledger directly: signs with per-sender nonces, seals with whichever
// validator's turn it is, and keeps the raw encoded chain for audit tests.
struct TestChain {
  Actors actors;
  GenesisConfig genesis;
  LedgerState state;
  std::vector<Bytes> raw_blocks;
  std::map<std::array<uint8_t, 32>, uint64_t> nonces;
  uint64_t clock = 1700000000;

  explicit TestChain(uint64_t chain_id = 7)
      : genesis(test_genesis(actors, chain_id)), state(genesis) {
    raw_blocks.push_back(encode_block(genesis.genesis_block()).value());
  }

  Transaction make_tx(const Keypair& key, TxPayload payload) {
    uint64_t nonce = ++nonces[key.pub.bytes];
    return sign_transaction(std::move(payload), nonce, key, genesis.chain_id);
  }

  const Keypair& proposer_for(uint64_t height) {
    PublicKeyId id = genesis.expected_proposer(height);
    for (const Keypair* k : {&actors.validator_a, &actors.validator_b, &actors.validator_c})
      if (k->pub == id) return *k;
    throw std::logic_error("no key for proposer");
  }

  // Seals the transactions into one block; returns the per-tx rejections.
  std::vector<std::pair<Hash256, Error>> seal(std::vector<Transaction> txs) {
    auto sealed = seal_block(txs, state, proposer_for(state.height() + 1), ++clock, true);
    if (!sealed) throw std::runtime_error(sealed.error().detail);
    raw_blocks.push_back(encode_block(sealed->block).value());
    return std::move(sealed->rejected);
  }

  // Submits one transaction and requires it to commit.
  void commit(const Keypair& key, TxPayload payload) {
    auto rejected = seal({make_tx(key, std::move(payload))});
    if (!rejected.empty())
      throw std::runtime_error("unexpected rejection: " + rejected[0].second.detail);
  }

  // Submits one transaction and returns the rejection code (OK if committed).
  ErrorCode try_commit(const Keypair& key, TxPayload payload) {
    auto rejected = seal({make_tx(key, std::move(payload))});
    return rejected.empty() ? ErrorCode::OK : rejected[0].second.code;
  }
};

// Scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& label) {
    static std::atomic<uint64_t> counter{0};
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           (label + "-" + std::to_string(::getpid()) + "-" + std::to_string(rd()) + "-" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

// A chain with every pipeline role registered and off-chain stores wired up.
struct Pipeline {
  TestChain chain;
  TempDir dir{"rlchain-test"};
  ContentStore cas{dir.path / "cas"};
  std::filesystem::path toc_dir{dir.path / "toc"};

  Pipeline() {
    std::filesystem::create_directories(toc_dir);
    const Actors& a = chain.actors;
    auto reg = [&](const Keypair& who, Role role, const char* name) {
      chain.commit(a.registrar, RegisterStakeholderPayload{who.pub, role, name});
    };
    reg(a.retailer, Role::RETAILER, "Retailer");
    reg(a.logistics, Role::THIRD_PARTY_LOGISTICS, "Carrier");
    reg(a.manufacturer, Role::MANUFACTURER, "Maker");
    reg(a.refurbisher, Role::REFURBISHER, "Refurb");
    reg(a.customer, Role::CUSTOMER, "Customer");
    reg(a.government, Role::GOVERNMENT, "Inspector");
  }

  // Stores a synthetic report in the CAS and the actor's TOC; returns its
  // address for use as a detail hash.
  Hash256 attach(const Keypair& actor, const std::string& key, const std::string& body) {
    Bytes bytes(body.begin(), body.end());
    Hash256 address = cas.put(bytes).value();
    auto toc = TocLog::open(toc_dir / (actor.pub.hex() + ".log"));
    toc->append(key, address);
    return address;
  }

  void register_device(const std::string& serial) {
    RegisterDevicePayload p;
    p.serial = serial;
    p.model = "PX-1";
    p.original_manufacturer = chain.actors.manufacturer.pub;
    for (int i = 0; i < kComponentTypeCount; ++i) {
      ComponentEntry c;
      c.type = static_cast<ComponentType>(i);
      c.serial = serial + "-c" + std::to_string(i);
      c.feature_info_hash = attach(chain.actors.manufacturer,
                                   "feature/" + c.serial, "feature sheet " + c.serial);
      p.components.push_back(std::move(c));
    }
    chain.commit(chain.actors.manufacturer, p);
  }

  void event(const Keypair& actor, const std::string& serial, EventType type,
             EventResult result = EventResult::NA, PublicKeyId counterparty = {}) {
    RecordEventPayload p;
    p.event_type = type;
    p.device_serial = serial;
    p.counterparty = counterparty;
    p.result = result;
    static uint64_t report_no = 0;
    p.detail_hash = attach(actor, std::string(event_type_name(type)) + "/" + serial,
                           std::string(event_type_name(type)) + " report " + serial + " #" +
                               std::to_string(++report_no));
    chain.commit(actor, p);
  }

  // Anchors everything currently in the actor's TOC.
  void anchor(const Keypair& actor) {
    auto toc = TocLog::open(toc_dir / (actor.pub.hex() + ".log"));
    AnchorTocPayload p;
    p.toc_length = toc->length();
    p.toc_root = toc->root(toc->length()).value();
    chain.commit(actor, p);
  }

  // The full compliant flow: collection -> 3PL transit -> refurbisher
  // processing -> classification -> sale.
  void run_compliant_flow(const std::string& serial) {
    const Actors& a = chain.actors;
    register_device(serial);
    event(a.retailer, serial, EventType::COLLECTION, EventResult::NA, a.customer.pub);
    event(a.retailer, serial, EventType::CUSTODY_TRANSFER, EventResult::NA, a.logistics.pub);
    event(a.logistics, serial, EventType::CUSTODY_TRANSFER, EventResult::NA, a.refurbisher.pub);
    event(a.refurbisher, serial, EventType::INSPECTION);
    event(a.refurbisher, serial, EventType::PHYSICAL_CONDITION_ANALYSIS);
    event(a.refurbisher, serial, EventType::DATA_WIPE);
    event(a.refurbisher, serial, EventType::CUSTOMIZATION_REMOVAL);
    event(a.refurbisher, serial, EventType::REPAIR);
    event(a.refurbisher, serial, EventType::FUNCTIONAL_TEST, EventResult::PASS);
    ClassifyDevicePayload cls;
    cls.device_serial = serial;
    cls.classification = Classification::REFURBISHED;
    cls.detail_hash = attach(a.refurbisher, "CLASSIFICATION/" + serial, "grade sheet " + serial);
    chain.commit(a.refurbisher, cls);
    event(a.refurbisher, serial, EventType::SALE, EventResult::NA, a.customer.pub);
    for (const Keypair* k : {&a.manufacturer, &a.retailer, &a.logistics, &a.refurbisher})
      anchor(*k);
  }
};

// Appends a sealed block containing the given transactions WITHOUT running
// contract validation — the tool for writing histories that a correct node
// would refuse, so the audit has something to find.
inline void forge(Pipeline& pl, std::vector<Transaction> txs) {
  TestChain& chain = pl.chain;
  Block b;
  b.transactions = std::move(txs);
  b.header.version = 1;
  b.header.height = chain.raw_blocks.size();
  b.header.prev_hash = header_hash(decode_block(chain.raw_blocks.back())->header);
  b.header.tx_merkle_root = block_tx_root(b);
  b.header.timestamp = ++chain.clock;
  const Keypair& proposer = chain.proposer_for(b.header.height);
  b.header.proposer = proposer.pub;
  b.header.seal = sign(proposer, seal_preimage(b.header, chain.genesis.chain_id));
  chain.raw_blocks.push_back(encode_block(b).value());
}

inline Transaction forge_event(Pipeline& pl, const Keypair& actor, const std::string& serial,
                               EventType type, Hash256 detail,
                               EventResult result = EventResult::NA,
                               PublicKeyId counterparty = {}) {
  RecordEventPayload p;
  p.event_type = type;
  p.device_serial = serial;
  p.counterparty = counterparty;
  p.result = result;
  p.detail_hash = detail;
  return pl.chain.make_tx(actor, p);
}

}  // namespace rltest
