#pragma once

#include <filesystem>
#include <vector>

#include "rlchain/block.hpp"
#include "rlchain/errors.hpp"
#include "rlchain/keys.hpp"

namespace rlchain {

// Chain bootstrap config. On disk it is a JSON document:
//   {"chain_id": <u64>, "validators": ["<hex32>", ...], "registrars": ["<hex32>", ...]}
struct GenesisConfig {
  uint64_t chain_id = 0;
  std::vector<PublicKeyId> validators;
  std::vector<PublicKeyId> registrars;

  bool is_validator(const PublicKeyId& key) const;
  bool is_registrar(const PublicKeyId& key) const;

  // Round-robin: proposer for height h >= 1 is validators[(h - 1) % n].
  PublicKeyId expected_proposer(uint64_t height) const;

  // Deterministic genesis block: height 0, zero prev hash, empty tx list,
  // zero timestamp/proposer/seal.
  Block genesis_block() const;

  static Result<GenesisConfig> load(const std::filesystem::path& path);
  static Result<GenesisConfig> parse(const std::string& json_text);
  std::string to_json() const;
  Status save(const std::filesystem::path& path) const;
};

}  // namespace rlchain
