#include "rlchain/genesis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rlchain/merkle.hpp"

namespace rlchain {

bool GenesisConfig::is_validator(const PublicKeyId& key) const {
  return std::find(validators.begin(), validators.end(), key) != validators.end();
}

bool GenesisConfig::is_registrar(const PublicKeyId& key) const {
  return std::find(registrars.begin(), registrars.end(), key) != registrars.end();
}

PublicKeyId GenesisConfig::expected_proposer(uint64_t height) const {
  if (validators.empty() || height == 0) return PublicKeyId{};
  return validators[(height - 1) % validators.size()];
}

Block GenesisConfig::genesis_block() const {
  Block block;
  block.header.version = 1;
  block.header.height = 0;
  block.header.tx_merkle_root = merkle_root({});
  return block;
}

Result<GenesisConfig> GenesisConfig::parse(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    return Error{ErrorCode::SERIALIZATION_ERROR, "genesis file is not valid JSON"};
  GenesisConfig cfg;
  if (!doc.contains("chain_id") || !doc["chain_id"].is_number_unsigned())
    return Error{ErrorCode::SERIALIZATION_ERROR, "genesis: missing chain_id"};
  cfg.chain_id = doc["chain_id"].get<uint64_t>();
  auto read_keys = [](const nlohmann::json& arr, std::vector<PublicKeyId>& out) -> bool {
    if (!arr.is_array()) return false;
    for (const auto& item : arr) {
      if (!item.is_string()) return false;
      auto key = PublicKeyId::from_hex(item.get<std::string>());
      if (!key) return false;
      out.push_back(*key);
    }
    return true;
  };
  if (!doc.contains("validators") || !read_keys(doc["validators"], cfg.validators))
    return Error{ErrorCode::SERIALIZATION_ERROR, "genesis: bad validators list"};
  if (cfg.validators.empty())
    return Error{ErrorCode::SERIALIZATION_ERROR, "genesis: at least one validator required"};
  if (doc.contains("registrars") && !read_keys(doc["registrars"], cfg.registrars))
    return Error{ErrorCode::SERIALIZATION_ERROR, "genesis: bad registrars list"};
  return cfg;
}

Result<GenesisConfig> GenesisConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return Error{ErrorCode::NOT_FOUND, "genesis file not found: " + path.string()};
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string GenesisConfig::to_json() const {
  nlohmann::json doc;
  doc["chain_id"] = chain_id;
  doc["validators"] = nlohmann::json::array();
  for (const auto& v : validators) doc["validators"].push_back(v.hex());
  doc["registrars"] = nlohmann::json::array();
  for (const auto& r : registrars) doc["registrars"].push_back(r.hex());
  return doc.dump(2);
}

Status GenesisConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) return Error{ErrorCode::NOT_FOUND, "cannot write genesis file: " + path.string()};
  out << to_json() << "\n";
  return ok_status();
}

}  // namespace rlchain
