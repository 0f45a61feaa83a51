#include "rlchain/keystore.hpp"

#include <sys/stat.h>

#include <fstream>

#include "rlchain/hash.hpp"

namespace rlchain {

Keystore::Keystore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path Keystore::key_path(const std::string& name) const {
  return dir_ / (name + ".key");
}

Result<Keypair> Keystore::create(const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos)
    return Error{ErrorCode::INVALID_ARGUMENT, "key names must be non-empty and path-free"};
  auto path = key_path(name);
  if (std::filesystem::exists(path))
    return Error{ErrorCode::ALREADY_EXISTS, "key already exists: " + name};
  Keypair kp = Keypair::generate();
  {
    std::ofstream out(path);
    if (!out) return Error{ErrorCode::NOT_FOUND, "cannot write key file"};
    out << to_hex(kp.seed) << "\n" << kp.pub.hex() << "\n";
  }
  ::chmod(path.c_str(), S_IRUSR | S_IWUSR);
  return kp;
}

Result<Keypair> Keystore::load(const std::string& name) const {
  std::ifstream in(key_path(name));
  if (!in) return Error{ErrorCode::NOT_FOUND, "no such key: " + name};
  std::string seed_hex, pub_hex;
  in >> seed_hex >> pub_hex;
  auto seed_raw = from_hex(seed_hex);
  if (!seed_raw || seed_raw->size() != 32)
    return Error{ErrorCode::SERIALIZATION_ERROR, "corrupt key file: " + name};
  std::array<uint8_t, 32> seed;
  std::copy(seed_raw->begin(), seed_raw->end(), seed.begin());
  Keypair kp = Keypair::from_seed(seed);
  if (kp.pub.hex() != pub_hex)
    return Error{ErrorCode::INTEGRITY_FAILURE, "key file public key mismatch: " + name};
  return kp;
}

std::vector<std::string> Keystore::list() const {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() == ".key") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace rlchain
