#include "rlchain/merkle.hpp"

namespace rlchain {

namespace {
Hash256 hash_pair(const Hash256& left, const Hash256& right) {
  Bytes buf;
  buf.reserve(64);
  buf.insert(buf.end(), left.bytes.begin(), left.bytes.end());
  buf.insert(buf.end(), right.bytes.begin(), right.bytes.end());
  return sha256(buf);
}
}  // namespace

Hash256 merkle_root(const std::vector<Hash256>& leaves) {
  if (leaves.empty()) return sha256(Bytes{});
  std::vector<Hash256> level = leaves;
  while (level.size() > 1) {
    std::vector<Hash256> next;
    next.reserve((level.size() + 1) / 2);
    for (size_t i = 0; i < level.size(); i += 2) {
      const Hash256& left = level[i];
      const Hash256& right = (i + 1 < level.size()) ? level[i + 1] : level[i];
      next.push_back(hash_pair(left, right));
    }
    level = std::move(next);
  }
  return level.front();
}

Result<MerkleProof> merkle_prove(const std::vector<Hash256>& leaves, uint64_t index) {
  if (index >= leaves.size()) return Error{ErrorCode::OUT_OF_RANGE, "leaf index out of range"};
  MerkleProof proof;
  proof.leaf_index = index;
  std::vector<Hash256> level = leaves;
  uint64_t pos = index;
  while (level.size() > 1) {
    uint64_t sibling = (pos % 2 == 0) ? pos + 1 : pos - 1;
    if (sibling >= level.size()) sibling = pos;  // duplicated last node
    proof.path.push_back({level[sibling], pos % 2 == 0});
    std::vector<Hash256> next;
    next.reserve((level.size() + 1) / 2);
    for (size_t i = 0; i < level.size(); i += 2) {
      const Hash256& left = level[i];
      const Hash256& right = (i + 1 < level.size()) ? level[i + 1] : level[i];
      next.push_back(hash_pair(left, right));
    }
    level = std::move(next);
    pos /= 2;
  }
  return proof;
}

bool merkle_verify(const Hash256& leaf, const MerkleProof& proof, const Hash256& root) {
  Hash256 current = leaf;
  for (const auto& step : proof.path) {
    current = step.sibling_is_right ? hash_pair(current, step.sibling)
                                    : hash_pair(step.sibling, current);
  }
  return current == root;
}

}  // namespace rlchain
