#include "ppxgb/simulator.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ppxgb/bigint.hpp"
#include "ppxgb/inference.hpp"
#include "ppxgb/she_private.hpp"

namespace ppxgb {

namespace {

uint64_t range_max(const OpeParams& p) {
    return p.range_bits == 64 ? UINT64_MAX : (uint64_t(1) << p.range_bits) - 1;
}

uint64_t draw_in_interval(RandomSource& rng, uint64_t lo, uint64_t hi) {
    const uint64_t width = hi - lo + 1;
    if (width == 0) return lo + rng.u64();  // full 64-bit interval
    return lo + rng.u64_below(width);
}

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

EncryptedModel simulate_setup(const SetupLeakage& leakage, const SimContext& ctx,
                              RandomSource& rng, bool broken_zero_leaves) {
    ctx.encoding.validate();
    ctx.ope_params.validate();
    if (leakage.num_trees <= 0 ||
        leakage.depths.size() != static_cast<std::size_t>(leakage.num_trees))
        throw std::invalid_argument("simulate_setup: malformed setup leakage");

    std::size_t internal_total = 0;
    for (int d : leakage.depths) {
        if (d < 0 || d > 30) throw std::invalid_argument("simulate_setup: absurd tree depth");
        internal_total += (std::size_t(1) << d) - 1;
    }
    if (leakage.threshold_ranks.size() != internal_total ||
        leakage.feature_classes.size() != internal_total ||
        leakage.missing_is_yes.size() != internal_total)
        throw std::invalid_argument("simulate_setup: leakage vectors do not match shapes");

    // Distinct codomain values, one per rank class, sorted.
    const uint64_t top = range_max(ctx.ope_params);
    std::set<uint64_t> drawn;
    while (drawn.size() < leakage.rank_class_count)
        drawn.insert(draw_in_interval(rng, 0, top));
    const std::vector<uint64_t> rank_values(drawn.begin(), drawn.end());

    // Fresh pseudonym per feature class.
    int class_count = 0;
    for (int c : leakage.feature_classes) class_count = std::max(class_count, c + 1);
    std::vector<std::string> class_pseudonyms;
    std::set<std::string> used;
    while (static_cast<int>(class_pseudonyms.size()) < class_count) {
        uint8_t raw[16];
        rng.fill(raw, sizeof raw);
        std::string p = bytes_to_hex(raw, sizeof raw);
        if (used.insert(p).second) class_pseudonyms.push_back(std::move(p));
    }

    auto [pk, sk] = she_keygen_bits(ctx.she_modulus_bits, rng);
    (void)sk;  // the simulator never decrypts
    const mpz_class n2 = pk.n_squared();

    EncryptedModel encml;
    encml.user_id = ctx.user_id;
    encml.she_public = pk;
    encml.objective = ctx.objective;
    encml.num_classes = ctx.num_classes;
    encml.encoding = ctx.encoding;
    encml.ope_params = ctx.ope_params;

    std::size_t g = 0;  // global internal-node cursor, tree-major level order
    for (int d : leakage.depths) {
        EncCart tree;
        tree.root = 0;
        tree.depth = d;
        const std::size_t internal = (std::size_t(1) << d) - 1;
        const std::size_t total = (std::size_t(1) << (d + 1)) - 1;
        tree.nodes.resize(total);
        for (std::size_t i = 0; i < total; ++i) {
            EncNode& n = tree.nodes[i];
            n.id = static_cast<int>(i);
            if (i < internal) {
                if (leakage.threshold_ranks[g] >= rank_values.size())
                    throw std::invalid_argument("simulate_setup: rank out of bounds");
                n.pseudonym = class_pseudonyms[static_cast<std::size_t>(
                    leakage.feature_classes[g])];
                n.threshold_ct = OpeCiphertext{rank_values[leakage.threshold_ranks[g]]};
                n.yes = static_cast<int>(2 * i + 1);
                n.no = static_cast<int>(2 * i + 2);
                n.missing = leakage.missing_is_yes[g] ? n.yes : n.no;
                ++g;
            } else {
                n.is_leaf = true;
                // Broken mode: every leaf is the degenerate encryption of
                // zero (unit randomness), i.e. ciphertext value 1.
                n.score_ct.value =
                    broken_zero_leaves ? mpz_class(1) : 1 + rand_mpz_below(rng, n2 - 1);
            }
        }
        encml.trees.push_back(std::move(tree));
    }
    return encml;
}

IdealRun run_ideal(const SetupLeakage& setup_leakage, const LeakageOracle& oracle,
                   const SimContext& ctx, std::size_t num_queries, RandomSource& rng,
                   bool broken_zero_leaves) {
    if (num_queries == 0) throw std::invalid_argument("run_ideal: need at least one round");
    IdealRun run;
    run.encml = simulate_setup(setup_leakage, ctx, rng, broken_zero_leaves);

    // Recover the value ladder and the class -> pseudonym map from the
    // simulated artifact itself (first-occurrence order matches the leakage
    // labeling by construction).
    std::vector<uint64_t> rank_values;
    std::vector<std::string> class_pseudonyms;
    {
        std::set<uint64_t> values;
        std::set<std::string> seen;
        for (const auto& t : run.encml.trees)
            for (const auto& n : t.nodes) {
                if (n.is_leaf) continue;
                values.insert(n.threshold_ct.value);
                if (seen.insert(n.pseudonym).second) class_pseudonyms.push_back(n.pseudonym);
            }
        rank_values.assign(values.begin(), values.end());
    }
    const uint64_t top = range_max(ctx.ope_params);
    const std::size_t R = rank_values.size();

    for (std::size_t i = 0; i < num_queries; ++i) {
        const QueryLeakageSlice slice = oracle(i);
        EncryptedQuery q;
        if (slice.pattern_first < i) {
            // Repeat: reuse the earlier wire object verbatim.
            q = run.transcript.sigma[slice.pattern_first].first;
        } else {
            for (int attempt = 0;; ++attempt) {
                q.entries.clear();
                for (const auto& [cls, vr] : slice.entry_ranks) {
                    if (cls < 0 || cls >= static_cast<int>(class_pseudonyms.size()))
                        throw HarnessError("run_ideal: leaked feature class out of range");
                    uint64_t value;
                    if (vr.equal) {
                        if (vr.rank >= R) throw HarnessError("run_ideal: equal-rank out of range");
                        value = rank_values[vr.rank];
                    } else {
                        if (vr.rank > R) throw HarnessError("run_ideal: gap rank out of range");
                        const uint64_t lo = vr.rank == 0 ? 0 : rank_values[vr.rank - 1] + 1;
                        const uint64_t hi = vr.rank == R ? top : rank_values[vr.rank] - 1;
                        if (R > 0 && lo > hi)
                            throw HarnessError("run_ideal: leaked rank admits no codomain value");
                        value = draw_in_interval(rng, lo, hi);
                    }
                    q.entries[class_pseudonyms[static_cast<std::size_t>(cls)]] =
                        OpeCiphertext{value};
                }
                bool fresh = true;
                for (std::size_t j = 0; j < i && fresh; ++j)
                    if (run.transcript.sigma[j].first == q) fresh = false;
                if (fresh) break;
                if (attempt > 32)
                    throw HarnessError("run_ideal: unable to draw a fresh query object");
            }
        }

        InferOutput out = infer(run.encml, q, /*audit=*/true);
        // The synthesized entries must drive the evaluation down exactly the
        // leaked paths; anything else means the oracle and leakage disagree.
        if (out.audit.size() != slice.paths.size())
            throw HarnessError("run_ideal: leaked path count mismatch");
        for (std::size_t t = 0; t < out.audit.size(); ++t)
            if (out.audit[t].path != slice.paths[t])
                throw HarnessError("run_ideal: evaluation diverged from leaked path");

        run.audit.push_back(std::move(out.audit));
        run.transcript.sigma.emplace_back(std::move(q), std::move(out.result));
    }
    return run;
}

}  // namespace ppxgb
