#pragma once

#include <functional>

#include "ppxgb/client.hpp"
#include "ppxgb/leakage_model.hpp"
#include "ppxgb/setup.hpp"

namespace ppxgb {

// Adaptive query source for the real experiment: sees the transcript so far
// and produces the next plaintext query. The first query is expected to be
// drawn uniformly by the generator.
using QueryGen = std::function<Query(std::size_t index, const Transcript& so_far)>;

struct RealRun {
    EncryptedModel encml;
    KeyBundle bundle;
    Transcript transcript;
    std::vector<std::vector<TraversalRecord>> audit;
    // Leakage reconstructed from the run's artifacts (not from the model).
    SetupLeakage setup_leakage;
    QueryLeakage query_leakage;
    // Kept so callers can compute the definitional leakage for comparison.
    PlaintextModel padded;
    std::vector<Query> queries;
};

// The real experiment: pads the model, runs per-user setup and then
// num_queries protocol rounds with the real client and server, recording the
// transcript and the leakage observable from the run.
RealRun run_real(const PlaintextModel& model, const SetupParams& params,
                 std::size_t num_queries, const QueryGen& gen,
                 RandomSource& rng = system_random());

}  // namespace ppxgb
