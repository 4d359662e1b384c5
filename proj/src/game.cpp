#include "ppxgb/game.hpp"

#include <algorithm>
#include <cmath>

#include "ppxgb/inference.hpp"
#include "ppxgb/parallel.hpp"

namespace ppxgb {

namespace {

// One-sample Kolmogorov-Smirnov distance against Uniform[0,1).
double ks_distance(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::fabs(samples[i] - lo), std::fabs(hi - samples[i])));
    }
    return d;
}

// ~5% critical value. Calibration only shifts the flag rate identically in
// both worlds, so a rough constant is fine.
double ks_critical(std::size_t n) { return 1.36 / std::sqrt(static_cast<double>(n)); }

constexpr std::size_t kMinSamples = 5;

int coin(std::mt19937_64& rng) { return static_cast<int>(rng() & 1); }

// Flag-on-anomaly rule: an anomalous statistic votes "ideal", otherwise the
// guess is a coin flip. Matched distributions give zero advantage; a broken
// simulator turns the flag on almost surely.
int flag_or_coin(bool anomalous, std::mt19937_64& rng) { return anomalous ? 1 : coin(rng); }

double unit_u64(uint64_t v) { return std::ldexp(static_cast<double>(v), -64); }

int threshold_magnitude_guess(const Observables& obs, std::mt19937_64& rng) {
    std::vector<double> samples;
    for (const auto& t : obs.encml.trees)
        for (const auto& n : t.nodes)
            if (!n.is_leaf) samples.push_back(unit_u64(n.threshold_ct.value));
    if (samples.size() < kMinSamples) return coin(rng);
    return flag_or_coin(ks_distance(samples) > ks_critical(samples.size()), rng);
}

int query_magnitude_guess(const Observables& obs, std::mt19937_64& rng) {
    std::vector<double> samples;
    std::size_t i = 0;
    for (const auto& [q, r] : obs.transcript.sigma) {
        // Count each distinct wire object once; repeats are the same bytes.
        bool repeat = false;
        for (std::size_t j = 0; j < i && !repeat; ++j)
            if (obs.transcript.sigma[j].first == q) repeat = true;
        ++i;
        if (repeat) continue;
        for (const auto& [pseudo, ct] : q.entries) samples.push_back(unit_u64(ct.value));
    }
    if (samples.size() < kMinSamples) return coin(rng);
    return flag_or_coin(ks_distance(samples) > ks_critical(samples.size()), rng);
}

int leaf_magnitude_guess(const Observables& obs, std::mt19937_64& rng) {
    const mpz_class n2 = obs.encml.she_public.n_squared();
    const double n2d = n2.get_d();
    std::vector<double> samples;
    for (const auto& t : obs.encml.trees)
        for (const auto& n : t.nodes)
            if (n.is_leaf) samples.push_back(n.score_ct.value.get_d() / n2d);
    for (const auto& [q, r] : obs.transcript.sigma)
        for (const auto& ct : r.class_cts) samples.push_back(ct.value.get_d() / n2d);
    if (samples.size() < kMinSamples) return coin(rng);
    return flag_or_coin(ks_distance(samples) > ks_critical(samples.size()), rng);
}

int path_frequency_guess(const Observables& obs, std::mt19937_64& rng) {
    // Branch balance: fraction of comparisons resolving to the yes child.
    std::size_t yes_taken = 0, total = 0;
    for (std::size_t qi = 0; qi < obs.audit.size(); ++qi) {
        for (const auto& rec : obs.audit[qi]) {
            const auto& tree = obs.encml.trees[static_cast<std::size_t>(rec.tree_index)];
            for (std::size_t s = 0; s + 1 < rec.path.size(); ++s) {
                const EncNode& n = tree.node(rec.path[s]);
                ++total;
                if (rec.path[s + 1] == n.yes) ++yes_taken;
            }
        }
    }
    if (total < kMinSamples) return coin(rng);
    const double frac = static_cast<double>(yes_taken) / static_cast<double>(total);
    const double z = std::fabs(frac - 0.5) * 2.0 * std::sqrt(static_cast<double>(total));
    return flag_or_coin(z > 1.96, rng);
}

int consistency_guess(const Observables& obs, std::mt19937_64& rng) {
    // Re-evaluate every query against the shown model; shown paths and
    // results must match what the evaluation actually does.
    bool anomalous = false;
    for (std::size_t i = 0; i < obs.transcript.sigma.size() && !anomalous; ++i) {
        InferOutput out = infer(obs.encml, obs.transcript.sigma[i].first, /*audit=*/true);
        if (out.audit != obs.audit[i]) anomalous = true;
        if (!(out.result == obs.transcript.sigma[i].second)) anomalous = true;
    }
    return flag_or_coin(anomalous, rng);
}

int transcript_shape_guess(const Observables& obs, std::mt19937_64& rng) {
    bool anomalous = false;
    const int classes =
        obs.encml.objective == Objective::softmax ? obs.encml.num_classes : 1;
    const mpz_class n2 = obs.encml.she_public.n_squared();
    std::size_t entry_count = obs.transcript.sigma.empty()
                                  ? 0
                                  : obs.transcript.sigma.front().first.entries.size();
    for (const auto& [q, r] : obs.transcript.sigma) {
        if (q.entries.size() != entry_count) anomalous = true;
        if (static_cast<int>(r.class_cts.size()) != classes) anomalous = true;
        for (const auto& ct : r.class_cts)
            if (ct.value <= 0 || ct.value >= n2) anomalous = true;
    }
    if (obs.audit.size() != obs.transcript.sigma.size()) anomalous = true;
    return flag_or_coin(anomalous, rng);
}

}  // namespace

std::vector<Distinguisher> builtin_battery() {
    return {
        {"uniform_guess", [](const Observables&, std::mt19937_64& rng) { return coin(rng); }},
        {"threshold_magnitude_ks", threshold_magnitude_guess},
        {"query_magnitude_ks", query_magnitude_guess},
        {"leaf_magnitude_ks", leaf_magnitude_guess},
        {"path_frequency", path_frequency_guess},
        {"evaluation_consistency", consistency_guess},
        {"transcript_shape", transcript_shape_guess},
    };
}

namespace {

struct RoundOutcome {
    std::vector<int> correct;  // per distinguisher, 0/1
};

RoundOutcome play_round(const GameConfig& config, const std::vector<Distinguisher>& battery,
                        std::size_t round) {
    std::mt19937_64 round_rng(config.seed * 0x9e3779b97f4a7c15ULL + round + 1);
    DrbgRandom crypto_rng((config.seed << 20) ^ (round * 2 + 1));

    PlaintextModel model = gen_model(round_rng, config.fixture);
    PlaintextModel padded = pad_model(model, round_rng);

    const std::size_t m = config.queries_per_round;
    std::vector<Query> queries;
    queries.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        queries.push_back(gen_query(round_rng, padded, config.fixture.value_span,
                                    /*avoid_razor_edges=*/false));
    if (m >= 4) queries[m / 2] = queries[m / 4];  // exercise the query pattern

    const int b = coin(round_rng);

    EncryptedModel encml;
    Transcript transcript;
    std::vector<std::vector<TraversalRecord>> audit;

    SetupParams sp;
    sp.k = 128;
    sp.she_modulus_bits = config.she_modulus_bits;
    sp.pad = false;  // the referee already padded
    sp.threads = 1;

    if (b == 0) {
        auto [em, bundle] = setup_user(padded, sp, "game-user", crypto_rng);
        encml = std::move(em);
        for (const auto& q : queries) {
            EncryptedQuery eq = encrypt_query(bundle, q);
            InferOutput out = infer(encml, eq, /*audit=*/true);
            audit.push_back(std::move(out.audit));
            transcript.sigma.emplace_back(std::move(eq), std::move(out.result));
        }
    } else {
        const SetupLeakage sl = leak_setup(padded, sp.encoding);
        const QueryLeakage ql = leak_query(padded, queries, sp.encoding);
        SimContext ctx;
        ctx.k = sp.k;
        ctx.she_modulus_bits = config.she_modulus_bits;
        ctx.encoding = sp.encoding;
        ctx.ope_params = sp.ope_params;
        ctx.objective = padded.objective;
        ctx.num_classes = padded.num_classes;
        ctx.user_id = "game-user";
        const LeakageOracle oracle = [&](std::size_t i) {
            return QueryLeakageSlice{ql.query_pattern[i], ql.entry_ranks[i], ql.paths[i]};
        };
        IdealRun run =
            run_ideal(sl, oracle, ctx, m, crypto_rng, config.broken_simulator);
        encml = std::move(run.encml);
        transcript = std::move(run.transcript);
        audit = std::move(run.audit);
    }

    const Observables obs{encml, transcript, audit};
    RoundOutcome outcome;
    outcome.correct.reserve(battery.size());
    for (const auto& d : battery)
        outcome.correct.push_back(d.guess(obs, round_rng) == b ? 1 : 0);
    return outcome;
}

}  // namespace

std::vector<AdvantageReport> distinguisher_game(const GameConfig& config) {
    if (config.rounds < 100)
        throw std::invalid_argument("distinguisher_game: need at least 100 rounds");
    const std::vector<Distinguisher> battery = builtin_battery();
    std::vector<std::size_t> correct(battery.size(), 0);

    const int nthreads = resolve_threads(config.threads);
    if (nthreads <= 1) {
        for (std::size_t r = 0; r < config.rounds; ++r) {
            const RoundOutcome o = play_round(config, battery, r);
            for (std::size_t d = 0; d < battery.size(); ++d)
                correct[d] += static_cast<std::size_t>(o.correct[d]);
        }
    } else {
        std::exception_ptr failure;
#pragma omp parallel num_threads(nthreads)
        {
            std::vector<std::size_t> local(battery.size(), 0);
#pragma omp for schedule(dynamic, 4)
            for (long r = 0; r < static_cast<long>(config.rounds); ++r) {
                try {
                    const RoundOutcome o =
                        play_round(config, battery, static_cast<std::size_t>(r));
                    for (std::size_t d = 0; d < battery.size(); ++d)
                        local[d] += static_cast<std::size_t>(o.correct[d]);
                } catch (...) {
#pragma omp critical
                    if (!failure) failure = std::current_exception();
                }
            }
#pragma omp critical
            for (std::size_t d = 0; d < battery.size(); ++d) correct[d] += local[d];
        }
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<AdvantageReport> reports;
    for (std::size_t d = 0; d < battery.size(); ++d) {
        AdvantageReport rep;
        rep.name = battery[d].name;
        rep.rounds = config.rounds;
        rep.correct = correct[d];
        const double p = static_cast<double>(correct[d]) / static_cast<double>(config.rounds);
        rep.advantage = std::fabs(p - 0.5);
        const double half =
            1.96 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(config.rounds));
        rep.ci_low = std::max(0.0, rep.advantage - half);
        rep.ci_high = rep.advantage + half;
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace ppxgb
