// Microbenchmarks for the hot paths: hashing, Merkle roots, transaction
// encode/sign/verify, sealing, and replay.

#include <benchmark/benchmark.h>

#include "rlchain/ledger.hpp"
#include "rlchain/merkle.hpp"
#include "rlchain/transaction.hpp"
#include "helpers.hpp"

using namespace rlchain;
using namespace rltest;

namespace {

Transaction sample_event_tx(const Keypair& key, uint64_t nonce) {
  RecordEventPayload p;
  p.event_type = EventType::REPAIR;
  p.device_serial = "BENCH-1";
  p.detail_hash = test_hash256(0xee);
  return sign_transaction(p, nonce, key, 7);
}

void BM_Sha256_1KiB(benchmark::State& state) {
  Bytes data(1024, 0xab);
  for (auto _ : state) benchmark::DoNotOptimize(sha256(data));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * 1024);
}
BENCHMARK(BM_Sha256_1KiB);

void BM_MerkleRoot(benchmark::State& state) {
  std::vector<Hash256> leaves;
  for (int i = 0; i < state.range(0); ++i)
    leaves.push_back(test_hash256(static_cast<uint8_t>(i)));
  for (auto _ : state) benchmark::DoNotOptimize(merkle_root(leaves));
}
BENCHMARK(BM_MerkleRoot)->Arg(8)->Arg(64)->Arg(512);

void BM_TxEncode(benchmark::State& state) {
  auto tx = sample_event_tx(test_key(0x5a), 1);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_serialize(tx));
}
BENCHMARK(BM_TxEncode);

void BM_TxSign(benchmark::State& state) {
  Keypair key = test_key(0x5a);
  uint64_t nonce = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_event_tx(key, ++nonce));
}
BENCHMARK(BM_TxSign);

void BM_TxVerify(benchmark::State& state) {
  auto tx = sample_event_tx(test_key(0x5a), 1);
  for (auto _ : state) benchmark::DoNotOptimize(verify_transaction_signature(tx, 7));
}
BENCHMARK(BM_TxVerify);

void BM_SealBlock(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    TestChain chain;
    const Actors& a = chain.actors;
    chain.commit(a.registrar, RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"});
    RegisterDevicePayload dev;
    dev.serial = "BENCH-1";
    dev.model = "PX";
    dev.original_manufacturer = a.retailer.pub;
    for (int i = 0; i < kComponentTypeCount; ++i)
      dev.components.push_back({static_cast<ComponentType>(i), "c" + std::to_string(i),
                                test_hash256(1)});
    chain.commit(a.retailer, dev);
    RecordEventPayload p;
    p.event_type = EventType::COLLECTION;
    p.device_serial = "BENCH-1";
    p.detail_hash = test_hash256(0xee);
    chain.commit(a.retailer, p);
    p.event_type = EventType::INSPECTION;
    chain.commit(a.retailer, p);
    std::vector<Transaction> txs;
    for (int i = 0; i < 32; ++i) {
      p.event_type = EventType::REPAIR;
      txs.push_back(chain.make_tx(a.retailer, p));
    }
    state.ResumeTiming();
    auto sealed = seal_block(txs, chain.state, chain.proposer_for(chain.state.height() + 1),
                             ++chain.clock, false);
    benchmark::DoNotOptimize(sealed);
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_SealBlock)->Unit(benchmark::kMicrosecond);

void BM_VerifyChain50(benchmark::State& state) {
  TestChain chain;
  const Actors& a = chain.actors;
  chain.commit(a.registrar, RegisterStakeholderPayload{a.retailer.pub, Role::RETAILER, "R"});
  while (chain.raw_blocks.size() < 50) chain.seal({});
  for (auto _ : state) benchmark::DoNotOptimize(verify_chain(chain.raw_blocks, chain.genesis));
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_VerifyChain50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
