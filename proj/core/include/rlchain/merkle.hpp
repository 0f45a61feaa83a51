#pragma once

#include <cstdint>
#include <vector>

#include "rlchain/errors.hpp"
#include "rlchain/hash.hpp"

namespace rlchain {

// Root rules: empty list -> SHA-256 of empty input; single leaf -> the leaf
// itself; otherwise pairwise SHA-256(left || right) per level, duplicating the
// last node when a level has an odd count.
Hash256 merkle_root(const std::vector<Hash256>& leaves);

struct ProofStep {
  Hash256 sibling;
  bool sibling_is_right = false;
};

struct MerkleProof {
  uint64_t leaf_index = 0;
  std::vector<ProofStep> path;
};

Result<MerkleProof> merkle_prove(const std::vector<Hash256>& leaves, uint64_t index);

bool merkle_verify(const Hash256& leaf, const MerkleProof& proof, const Hash256& root);

}  // namespace rlchain
