#pragma once

#include <map>
#include <string>
#include <vector>

#include "ppxgb/encoding.hpp"
#include "ppxgb/objective.hpp"
#include "ppxgb/ope_types.hpp"
#include "ppxgb/she.hpp"

namespace ppxgb {

// Node of an encrypted tree. Internal nodes carry a feature pseudonym and an
// order-preserving threshold ciphertext; leaves carry an additively
// homomorphic score ciphertext. No plaintext name or value appears.
struct EncNode {
    int id = 0;
    bool is_leaf = false;
    std::string pseudonym;
    OpeCiphertext threshold_ct;
    int yes = -1;
    int no = -1;
    int missing = -1;
    SheCiphertext score_ct;

    bool operator==(const EncNode&) const = default;
};

struct EncCart {
    int root = 0;
    std::vector<EncNode> nodes;
    int depth = 0;

    const EncNode& node(int id) const;

    bool operator==(const EncCart&) const = default;
};

// Per-user encrypted model: structurally isomorphic trees plus the public
// parameters a server needs to evaluate queries. Contains no key material.
struct EncryptedModel {
    int version = 1;
    std::string user_id;
    ShePublicKey she_public;
    Objective objective = Objective::binary_margin;
    int num_classes = 1;
    EncodingParams encoding;
    OpeParams ope_params;
    std::vector<EncCart> trees;

    bool operator==(const EncryptedModel&) const = default;
};

// Wire form of a query: feature pseudonym -> order-preserving ciphertext.
struct EncryptedQuery {
    std::map<std::string, OpeCiphertext> entries;

    bool operator==(const EncryptedQuery&) const = default;
};

// One ciphertext per class (a single entry for binary margin).
struct EncryptedResult {
    std::vector<SheCiphertext> class_cts;

    bool operator==(const EncryptedResult&) const = default;
};

// Root-to-leaf node ids walked by one tree evaluation.
struct TraversalRecord {
    int tree_index = 0;
    std::vector<int> path;

    bool operator==(const TraversalRecord&) const = default;
};

// JSON wire formats. Order-preserving ciphertexts serialize as decimal
// strings (64-bit values exceed common JSON number precision); big integers
// serialize as lowercase hex strings.
std::string encrypted_model_to_json(const EncryptedModel& m);
EncryptedModel encrypted_model_from_json(const std::string& text);

std::string encrypted_query_to_json(const EncryptedQuery& q);
EncryptedQuery encrypted_query_from_json(const std::string& text);

std::string encrypted_result_to_json(const EncryptedResult& r);
EncryptedResult encrypted_result_from_json(const std::string& text);

}  // namespace ppxgb
