#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace rlchain;
using namespace rltest;

TEST_CASE("genesis block is deterministic") {
  Actors a;
  GenesisConfig g = test_genesis(a);
  Block b1 = g.genesis_block();
  Block b2 = g.genesis_block();
  CHECK(b1 == b2);
  CHECK(b1.header.height == 0);
  CHECK(b1.header.prev_hash.is_zero());
  CHECK(b1.header.timestamp == 0);
  CHECK(b1.transactions.empty());
  CHECK(encode_block(b1).value() == encode_block(b2).value());

  // Chain id and validator set both shape the genesis identity via config,
  // not the block encoding itself, so two configs give identical blocks only
  // when they agree.
  GenesisConfig g2 = g;
  g2.chain_id = 8;
  CHECK(g.to_json() != g2.to_json());
}

TEST_CASE("genesis config json round trip") {
  Actors a;
  GenesisConfig g = test_genesis(a);
  auto parsed = GenesisConfig::parse(g.to_json());
  REQUIRE(parsed);
  CHECK(parsed->chain_id == g.chain_id);
  CHECK(parsed->validators == g.validators);
  CHECK(parsed->registrars == g.registrars);
  CHECK(!GenesisConfig::parse("{"));
  CHECK(!GenesisConfig::parse("{\"chain_id\": 1, \"validators\": [\"zz\"]}"));
}

TEST_CASE("block encode/decode round trip") {
  TestChain chain;
  auto tx = chain.make_tx(chain.actors.registrar,
                          RegisterStakeholderPayload{chain.actors.retailer.pub, Role::RETAILER,
                                                     "Retailer"});
  auto sealed = seal_block({tx}, chain.state, chain.actors.validator_a, 1000, false);
  REQUIRE(sealed);
  Bytes bytes = encode_block(sealed->block).value();
  auto back = decode_block(bytes);
  REQUIRE(back);
  CHECK(back.value() == sealed->block);
  Bytes truncated(bytes.begin(), bytes.end() - 1);
  CHECK(!decode_block(truncated));
  bytes.push_back(0);
  CHECK(!decode_block(bytes));
}

TEST_CASE("round robin proposer rotation") {
  TestChain chain;
  const Actors& a = chain.actors;
  CHECK(chain.genesis.expected_proposer(1) == a.validator_a.pub);
  CHECK(chain.genesis.expected_proposer(2) == a.validator_b.pub);
  CHECK(chain.genesis.expected_proposer(3) == a.validator_c.pub);
  CHECK(chain.genesis.expected_proposer(4) == a.validator_a.pub);

  // Wrong validator for height 1.
  auto wrong = seal_block({}, chain.state, a.validator_b, 1000, true);
  CHECK(!wrong);
  CHECK(wrong.code() == ErrorCode::NOT_YOUR_TURN);

  // Correct one succeeds; state advances; next turn moves on.
  auto b1 = seal_block({}, chain.state, a.validator_a, 1000, true);
  REQUIRE(b1);
  CHECK(chain.state.height() == 1);
  auto again_a = seal_block({}, chain.state, a.validator_a, 1001, true);
  CHECK(again_a.code() == ErrorCode::NOT_YOUR_TURN);
  auto b2 = seal_block({}, chain.state, a.validator_b, 1001, true);
  REQUIRE(b2);
  CHECK(chain.state.height() == 2);

  // A non-validator key can never seal, at any height.
  auto outsider = seal_block({}, chain.state, a.outsider, 1002, true);
  CHECK(outsider.code() == ErrorCode::PERMISSION_DENIED);
}

TEST_CASE("sealing skips invalid transactions instead of aborting") {
  TestChain chain;
  const Actors& a = chain.actors;
  auto good = chain.make_tx(a.registrar,
                            RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"});
  // Not a registrar: valid signature, invalid by contract rules.
  auto bad = chain.make_tx(a.outsider,
                           RegisterStakeholderPayload{a.customer.pub, Role::CUSTOMER, "X"});
  auto sealed = seal_block({good, bad}, chain.state, a.validator_a, 1000, false);
  REQUIRE(sealed);
  CHECK(sealed->block.transactions.size() == 1);
  REQUIRE(sealed->rejected.size() == 1);
  CHECK(sealed->rejected[0].first == tx_hash(bad).value());
  CHECK(sealed->rejected[0].second.code == ErrorCode::PERMISSION_DENIED);
  CHECK(chain.state.registry().find_stakeholder(a.retailer.pub) != nullptr);
}

TEST_CASE("empty seal makes no progress unless allowed") {
  TestChain chain;
  auto refused = seal_block({}, chain.state, chain.actors.validator_a, 1000, false);
  CHECK(refused.code() == ErrorCode::NO_PROGRESS);
  CHECK(chain.state.height() == 0);
  auto allowed = seal_block({}, chain.state, chain.actors.validator_a, 1000, true);
  CHECK(allowed);
  CHECK(chain.state.height() == 1);
}

TEST_CASE("nonces are strictly increasing per sender") {
  TestChain chain;
  const Actors& a = chain.actors;
  auto tx1 = sign_transaction(RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"}, 5,
                              a.registrar, chain.genesis.chain_id);
  auto rejected = chain.seal({tx1});
  CHECK(rejected.empty());

  // Replay and lower nonces both bounce.
  auto replay = chain.seal({tx1});
  REQUIRE(replay.size() == 1);
  CHECK(replay[0].second.code == ErrorCode::BAD_NONCE);
  auto low = sign_transaction(RegisterStakeholderPayload{a.logistics.pub,
                                                         Role::THIRD_PARTY_LOGISTICS, "L"},
                              3, a.registrar, chain.genesis.chain_id);
  auto low_rejected = chain.seal({low});
  REQUIRE(low_rejected.size() == 1);
  CHECK(low_rejected[0].second.code == ErrorCode::BAD_NONCE);

  // Gaps are fine: strictly greater is the only requirement.
  auto gap = sign_transaction(RegisterStakeholderPayload{a.logistics.pub,
                                                         Role::THIRD_PARTY_LOGISTICS, "L"},
                              100, a.registrar, chain.genesis.chain_id);
  CHECK(chain.seal({gap}).empty());
}

TEST_CASE("wrong chain id fails admission") {
  TestChain chain;
  const Actors& a = chain.actors;
  auto foreign = sign_transaction(RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"},
                                  1, a.registrar, chain.genesis.chain_id + 1);
  CHECK(chain.state.validate_transaction(foreign).code() == ErrorCode::BAD_SIGNATURE);
}

TEST_CASE("apply_block enforces header integrity") {
  TestChain chain;
  const Actors& a = chain.actors;
  auto tx = chain.make_tx(a.registrar,
                          RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"});
  LedgerState scratch = chain.state;
  auto sealed = seal_block({tx}, scratch, a.validator_a, 1000, false);
  REQUIRE(sealed);

  SUBCASE("intact block applies") {
    CHECK(chain.state.apply_block(sealed->block));
    CHECK(chain.state.height() == 1);
    CHECK(chain.state.state_digest() == scratch.state_digest());
  }
  SUBCASE("tampered merkle root") {
    Block b = sealed->block;
    b.header.tx_merkle_root.bytes[0] ^= 1;
    CHECK(!chain.state.apply_block(b));
    CHECK(chain.state.height() == 0);
  }
  SUBCASE("tampered seal") {
    Block b = sealed->block;
    b.header.seal[10] ^= 1;
    CHECK(!chain.state.apply_block(b));
  }
  SUBCASE("wrong prev hash") {
    Block b = sealed->block;
    b.header.prev_hash.bytes[5] ^= 1;
    CHECK(!chain.state.apply_block(b));
  }
  SUBCASE("timestamp going backwards") {
    CHECK(chain.state.apply_block(sealed->block));
    auto tx2 = chain.make_tx(a.registrar,
                             RegisterStakeholderPayload{a.logistics.pub,
                                                        Role::THIRD_PARTY_LOGISTICS, "L"});
    LedgerState scratch2 = chain.state;
    auto next = seal_block({tx2}, scratch2, a.validator_b, 2000, false);
    REQUIRE(next);
    Block back_in_time = next->block;
    back_in_time.header.timestamp = 999;
    CHECK(!chain.state.apply_block(back_in_time));  // seal breaks too, but must not apply
  }
}

TEST_CASE("verify_chain flags exactly the tampered block") {
  TestChain chain;
  const Actors& a = chain.actors;
  chain.commit(a.registrar, RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"});
  chain.commit(a.registrar,
               RegisterStakeholderPayload{a.manufacturer.pub, Role::MANUFACTURER, "M"});
  chain.commit(a.registrar, RegisterStakeholderPayload{a.refurbisher.pub, Role::REFURBISHER, "F"});

  auto clean = verify_chain(chain.raw_blocks, chain.genesis);
  CHECK(clean.ok);
  REQUIRE(clean.blocks.size() == chain.raw_blocks.size());

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    auto mutated = chain.raw_blocks;
    size_t block_idx = 1 + rng() % (mutated.size() - 1);
    size_t bit = rng() % (mutated[block_idx].size() * 8);
    mutated[block_idx][bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    auto report = verify_chain(mutated, chain.genesis);
    CHECK(!report.ok);
    REQUIRE(report.blocks.size() >= block_idx + 1);
    CHECK(!report.blocks[block_idx].all_ok());  // the flip is attributed to its block
    for (size_t i = 0; i < block_idx; ++i) CHECK(report.blocks[i].all_ok());
  }
}

TEST_CASE("verify_chain flags genesis tampering") {
  TestChain chain;
  chain.commit(chain.actors.registrar,
               RegisterStakeholderPayload{chain.actors.retailer.pub, Role::RETAILER, "R"});
  auto mutated = chain.raw_blocks;
  mutated[0][mutated[0].size() / 2] ^= 1;
  auto report = verify_chain(mutated, chain.genesis);
  CHECK(!report.ok);
  CHECK(!report.blocks[0].all_ok());
}

TEST_CASE("state digest is replay-deterministic") {
  TestChain chain;
  const Actors& a = chain.actors;
  chain.commit(a.registrar, RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"});
  chain.commit(a.registrar,
               RegisterStakeholderPayload{a.manufacturer.pub, Role::MANUFACTURER, "M"});

  LedgerState replay(chain.genesis);
  for (size_t i = 1; i < chain.raw_blocks.size(); ++i) {
    auto block = decode_block(chain.raw_blocks[i]);
    REQUIRE(block);
    REQUIRE(replay.apply_block(block.value()));
  }
  CHECK(replay.state_digest() == chain.state.state_digest());
  CHECK(replay.tip_hash() == chain.state.tip_hash());
}
