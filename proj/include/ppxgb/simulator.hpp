#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ppxgb/leakage.hpp"
#include "ppxgb/random.hpp"

namespace ppxgb {

// Public deployment context the simulator is allowed to know: wire-format
// parameters and the security parameter. No plaintext anywhere. This header
// deliberately has no access to plaintext-model types; the simulator works
// from leakage alone.
struct SimContext {
    unsigned k = 128;
    unsigned she_modulus_bits = 512;
    EncodingParams encoding;
    OpeParams ope_params;
    Objective objective = Objective::binary_margin;
    int num_classes = 1;
    std::string user_id;
};

// Builds an encrypted model from setup leakage alone: complete trees of the
// leaked depths, threshold slots filled with uniform draws from the
// order-preserving codomain arranged to satisfy the leaked rank structure,
// pseudonyms drawn fresh per leaked feature class, leaves drawn uniformly
// from the homomorphic ciphertext space. With broken_zero_leaves every leaf
// degenerates to the randomness-free encryption of zero; this deliberately
// unsound variant exists so the distinguisher battery can prove it has
// teeth.
EncryptedModel simulate_setup(const SetupLeakage& leakage, const SimContext& ctx,
                              RandomSource& rng = system_random(),
                              bool broken_zero_leaves = false);

// Leakage available for round i of the ideal experiment.
struct QueryLeakageSlice {
    std::size_t pattern_first = 0;  // smallest index with an equal query (== i if fresh)
    std::map<int, ValueRank> entry_ranks;
    std::vector<std::vector<int>> paths;
};

using LeakageOracle = std::function<QueryLeakageSlice(std::size_t round)>;

struct IdealRun {
    EncryptedModel encml;
    Transcript transcript;
    std::vector<std::vector<TraversalRecord>> audit;
};

// The ideal experiment: the simulator plays the client using only leakage.
// Fresh queries get entries drawn uniformly from the codomain interval their
// leaked rank admits, so the server-side evaluation provably walks the
// leaked paths; repeated queries reuse the earlier wire object. Results come
// from the real server-side evaluation of the simulated model.
IdealRun run_ideal(const SetupLeakage& setup_leakage, const LeakageOracle& oracle,
                   const SimContext& ctx, std::size_t num_queries,
                   RandomSource& rng = system_random(), bool broken_zero_leaves = false);

}  // namespace ppxgb
