#include "ppxgb/experiment.hpp"

#include <stdexcept>

#include "ppxgb/inference.hpp"

namespace ppxgb {

RealRun run_real(const PlaintextModel& model, const SetupParams& params,
                 std::size_t num_queries, const QueryGen& gen, RandomSource& rng) {
    if (num_queries == 0) throw std::invalid_argument("run_real: need at least one round");
    RealRun run;
    {
        std::mt19937_64 pad_rng(rng.u64());
        run.padded = pad_model(model, pad_rng);
    }
    // Trees are already complete, so the setup-internal pad is a no-op and
    // the encrypted model is node-for-node aligned with run.padded.
    auto [encml, bundle] = setup_user(run.padded, params, "real-experiment", rng);
    run.encml = std::move(encml);
    run.bundle = std::move(bundle);

    for (std::size_t i = 0; i < num_queries; ++i) {
        Query q = gen(i, run.transcript);
        EncryptedQuery eq = encrypt_query(run.bundle, q);
        InferOutput out = infer(run.encml, eq, /*audit=*/true);
        run.audit.push_back(std::move(out.audit));
        run.transcript.sigma.emplace_back(std::move(eq), std::move(out.result));
        run.queries.push_back(std::move(q));
    }

    run.setup_leakage = extract_setup_leakage(run.encml);
    run.query_leakage = extract_query_leakage(run.encml, run.transcript, run.audit);
    return run;
}

}  // namespace ppxgb
