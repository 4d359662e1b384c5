#pragma once

#include <string>
#include <utility>

#include "ppxgb/artifacts.hpp"
#include "ppxgb/keys.hpp"
#include "ppxgb/model.hpp"

namespace ppxgb {

struct SetupParams {
    unsigned k = 128;              // OPE/PRF key size
    unsigned she_modulus_bits = 0; // 0 -> derived from k (128 -> 2048)
    bool pad = true;               // pad all trees to the model-wide max depth
    int threads = 1;               // >1 parallelizes node encryption; see note below

    EncodingParams encoding;
    OpeParams ope_params;
};

// Builds the per-user encrypted model and the matching client key bundle.
// Fresh keys every call. With threads == 1 every random byte is drawn from
// `rng` in a fixed order, so a seeded source reproduces the run exactly;
// with threads > 1 the homomorphic encryptions draw from the system source
// instead (a deterministic stream cannot be shared across threads).
std::pair<EncryptedModel, KeyBundle> setup_user(const PlaintextModel& model,
                                                const SetupParams& params,
                                                const std::string& user_id,
                                                RandomSource& rng = system_random());

// Encrypts one padded tree: pseudonymized features, order-preserving
// threshold ciphertexts, homomorphic leaf ciphertexts. base_fold is added to
// every leaf before quantization (used to fold the model's base score into
// the first tree of each class).
EncCart encrypt_tree(const Cart& tree, const OpeKey& ope_key, const PrfKey& prf_key,
                     const OpeParams& ope_params, const EncodingParams& encoding,
                     const ShePublicKey& pk, double base_fold, int threads,
                     RandomSource& rng = system_random());

unsigned she_bits_for_k(unsigned k);

}  // namespace ppxgb
