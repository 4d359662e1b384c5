#pragma once

#include <utility>
#include <vector>

#include "ppxgb/artifacts.hpp"

namespace ppxgb {

// Server-side evaluation. This module sees only the encrypted model and the
// encrypted query; it holds no decryption capability of any kind.

struct InferOutput {
    EncryptedResult result;
    // Populated only when audit mode is on; empty otherwise.
    std::vector<TraversalRecord> audit;
};

// Walks one encrypted tree: absent pseudonym takes the missing branch,
// otherwise the yes branch iff the query ciphertext compares below the
// threshold ciphertext. Returns the reached leaf's ciphertext and the path.
std::pair<SheCiphertext, TraversalRecord> evaluate_encrypted_tree(const EncCart& tree,
                                                                  int tree_index,
                                                                  const EncryptedQuery& q);

// Evaluates every tree and homomorphically sums the leaf ciphertexts: one
// sum for binary margin, per-class sums (tree i -> class i mod num_classes)
// for softmax. Per-tree evaluation is independent and the ciphertext-space
// product commutes, so the parallel path returns bit-identical results.
InferOutput infer(const EncryptedModel& encml, const EncryptedQuery& q, bool audit = false,
                  int threads = 1);

}  // namespace ppxgb
