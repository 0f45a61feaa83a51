#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rlchain/errors.hpp"
#include "rlchain/keys.hpp"

namespace rlchain {

// Directory of named key files. Each <name>.key holds two hex lines: the
// 32-byte secret seed and the derived public key. Files are mode 0600.
class Keystore {
 public:
  explicit Keystore(std::filesystem::path dir);

  Result<Keypair> create(const std::string& name);
  Result<Keypair> load(const std::string& name) const;
  std::vector<std::string> list() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path key_path(const std::string& name) const;

  std::filesystem::path dir_;
};

}  // namespace rlchain
