#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>
#include <set>

#include "ppxgb/game.hpp"

using namespace ppxgb;

namespace {

const EncodingParams kEnc{};

QueryGen uniform_query_gen(uint64_t seed, const PlaintextModel& model) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng, &model](std::size_t, const Transcript&) {
        return gen_query(*rng, model, 100.0, false);
    };
}

SetupParams harness_params() {
    SetupParams p;
    p.she_modulus_bits = 512;
    return p;
}

SimContext context_for(const PlaintextModel& padded) {
    SimContext ctx;
    ctx.she_modulus_bits = 512;
    ctx.objective = padded.objective;
    ctx.num_classes = padded.num_classes;
    ctx.user_id = "real-experiment";
    return ctx;
}

LeakageOracle oracle_for(const QueryLeakage& ql) {
    return [&ql](std::size_t i) {
        return QueryLeakageSlice{ql.query_pattern[i], ql.entry_ranks[i], ql.paths[i]};
    };
}

PlaintextModel small_fixture(uint64_t seed, int max_trees = 5, int max_depth = 4) {
    std::mt19937_64 rng(seed);
    FixtureSpec spec;
    spec.max_trees = max_trees;
    spec.max_depth = max_depth;
    return gen_model(rng, spec);
}

}  // namespace

TEST_CASE("leak_setup counts trees and depths, ignores values") {
    PlaintextModel m = parse_model(R"([
        {"nodeid":0,"leaf":0.1},{"nodeid":0,"leaf":0.2},{"nodeid":0,"leaf":0.3}])");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 3; ++i)
        m.trees[static_cast<std::size_t>(i)] =
            pad_to_complete(m.trees[static_cast<std::size_t>(i)], i + 2, {"f0", "f1"}, -5.0,
                            5.0, rng);
    const SetupLeakage L = leak_setup(m, kEnc);
    CHECK(L.num_trees == 3);
    CHECK(L.depths == std::vector<int>{2, 3, 4});

    // Same shapes, different leaf values: identical leakage.
    PlaintextModel m2 = m;
    for (auto& t : m2.trees)
        for (auto& n : t.nodes)
            if (n.is_leaf) n.leaf_score += 7.5;
    CHECK(leak_setup(m2, kEnc) == L);
}

TEST_CASE("leak_setup requires complete trees") {
    const PlaintextModel m = parse_model(R"([
        {"nodeid":0,"split":"a","split_condition":1,"yes":1,"no":2,"children":[
          {"nodeid":1,"leaf":0},
          {"nodeid":2,"split":"a","split_condition":2,"yes":3,"no":4,"children":[
            {"nodeid":3,"leaf":0},{"nodeid":4,"leaf":0}]}]}])");
    CHECK_THROWS_AS(leak_setup(m, kEnc), std::invalid_argument);
}

TEST_CASE("threshold ranks match an independent sort oracle") {
    std::mt19937_64 rng(42);
    const PlaintextModel padded = pad_model(small_fixture(42), rng);
    const SetupLeakage L = leak_setup(padded, kEnc);

    std::vector<uint64_t> all;
    for (const auto& t : padded.trees)
        for (const auto& n : t.nodes)
            if (!n.is_leaf) all.push_back(quantize_feature(n.threshold, kEnc));
    std::size_t i = 0;
    for (const auto& t : padded.trees)
        for (const auto& n : t.nodes) {
            if (n.is_leaf) continue;
            const uint64_t mine = quantize_feature(n.threshold, kEnc);
            std::set<uint64_t> smaller;
            for (uint64_t v : all)
                if (v < mine) smaller.insert(v);
            CHECK(L.threshold_ranks[i] == smaller.size());
            ++i;
        }
    CHECK(i == L.threshold_ranks.size());
    CHECK(i == L.feature_classes.size());
    CHECK(i == L.missing_is_yes.size());
}

TEST_CASE("query pattern is the equality partition") {
    std::mt19937_64 rng(43);
    const PlaintextModel padded = pad_model(small_fixture(43), rng);
    std::mt19937_64 qrng(5);
    const Query a = gen_query(qrng, padded, 100.0, false);
    const Query b = gen_query(qrng, padded, 100.0, false);
    const std::vector<Query> seq{a, b, a};
    CHECK(leak_query(padded, seq, kEnc).query_pattern == std::vector<std::size_t>{0, 1, 0});
    const std::vector<Query> distinct{a, b};
    CHECK(leak_query(padded, distinct, kEnc).query_pattern == std::vector<std::size_t>{0, 1});
}

TEST_CASE("leak_query rejects features outside the model universe") {
    std::mt19937_64 rng(44);
    const PlaintextModel padded = pad_model(small_fixture(44), rng);
    Query q;
    q.features["no-such-feature"] = 1.0;
    const std::vector<Query> seq{q};
    CHECK_THROWS_AS(leak_query(padded, seq, kEnc), std::invalid_argument);
}

TEST_CASE("run_real: transcript, repeats, extraction equals definition") {
    const PlaintextModel base = small_fixture(7);

    DrbgRandom rng(991);
    std::mt19937_64 qrng(17);
    std::vector<Query> chosen;
    const QueryGen gen = [&](std::size_t i, const Transcript&) {
        if (i == 3)
            chosen.push_back(chosen[1]);  // deliberate repeat
        else
            chosen.push_back(gen_query(qrng, base, 100.0, false));
        return chosen.back();
    };
    const RealRun run = run_real(base, harness_params(), 6, gen, rng);

    CHECK(run.transcript.sigma.size() == 6);
    CHECK(run.queries.size() == 6);
    // Identical plaintext queries produce byte-identical encrypted queries.
    CHECK(run.transcript.sigma[3].first == run.transcript.sigma[1].first);
    CHECK(run.query_leakage.query_pattern[3] == 1);

    // The leakage computable from the run equals the definitional leakage.
    CHECK(run.setup_leakage == leak_setup(run.padded, kEnc));
    CHECK(run.query_leakage == leak_query(run.padded, run.queries, kEnc));

    // Path fidelity against plaintext traversal.
    for (std::size_t i = 0; i < run.queries.size(); ++i)
        for (std::size_t t = 0; t < run.padded.trees.size(); ++t)
            CHECK(run.audit[i][t].path ==
                  evaluate_tree(run.padded.trees[t], run.queries[i]).second);
}

TEST_CASE("extraction equals definition across seeds") {
    for (uint64_t seed = 100; seed < 110; ++seed) {
        const PlaintextModel base = small_fixture(seed, 4, 3);
        DrbgRandom rng(seed * 977 + 1);
        const RealRun run =
            run_real(base, harness_params(), 4, uniform_query_gen(seed * 31 + 7, base), rng);
        CHECK(run.setup_leakage == leak_setup(run.padded, kEnc));
        CHECK(run.query_leakage == leak_query(run.padded, run.queries, kEnc));
    }
}

TEST_CASE("simulated setup has the leaked structure and fresh material") {
    const PlaintextModel base = small_fixture(23, 4);
    DrbgRandom rng(1009);
    const RealRun real = run_real(base, harness_params(), 4, uniform_query_gen(29, base), rng);

    const SetupLeakage L = leak_setup(real.padded, kEnc);
    DrbgRandom sim_rng(2003);
    const EncryptedModel sim = simulate_setup(L, context_for(real.padded), sim_rng);

    // Passes the same structural validator (the wire parser) as real output.
    CHECK(encrypted_model_from_json(encrypted_model_to_json(sim)) == sim);

    // Its own extracted setup leakage equals the input leakage exactly.
    CHECK(extract_setup_leakage(sim) == L);

    REQUIRE(sim.trees.size() == real.encml.trees.size());
    for (std::size_t t = 0; t < sim.trees.size(); ++t) {
        CHECK(sim.trees[t].depth == real.encml.trees[t].depth);
        CHECK(sim.trees[t].nodes.size() == real.encml.trees[t].nodes.size());
    }

    // Simulated leaves collide with the real model's leaves nowhere.
    std::set<std::string> real_leaves;
    for (const auto& t : real.encml.trees)
        for (const auto& n : t.nodes)
            if (n.is_leaf) real_leaves.insert(n.score_ct.value.get_str(16));
    for (const auto& t : sim.trees)
        for (const auto& n : t.nodes)
            if (n.is_leaf) CHECK(!real_leaves.count(n.score_ct.value.get_str(16)));
}

TEST_CASE("run_ideal reproduces pattern, paths and transcript shape") {
    const PlaintextModel base = small_fixture(31, 4);
    DrbgRandom rng(3001);
    std::mt19937_64 qrng(37);
    std::vector<Query> chosen;
    const QueryGen gen = [&](std::size_t i, const Transcript&) {
        if (i == 4)
            chosen.push_back(chosen[0]);
        else
            chosen.push_back(gen_query(qrng, base, 100.0, false));
        return chosen.back();
    };
    const RealRun real = run_real(base, harness_params(), 6, gen, rng);
    const SetupLeakage sl = leak_setup(real.padded, kEnc);
    const QueryLeakage ql = leak_query(real.padded, real.queries, kEnc);

    DrbgRandom sim_rng(4001);
    const IdealRun ideal = run_ideal(sl, oracle_for(ql), context_for(real.padded), 6, sim_rng);

    CHECK(ideal.transcript.sigma.size() == real.transcript.sigma.size());
    CHECK(ideal.transcript.sigma[4].first == ideal.transcript.sigma[0].first);

    // Leakage extracted from the ideal transcript equals the oracle's.
    CHECK(extract_query_leakage(ideal.encml, ideal.transcript, ideal.audit) == ql);

    // Shape match: entry counts and result widths.
    for (std::size_t i = 0; i < ideal.transcript.sigma.size(); ++i) {
        CHECK(ideal.transcript.sigma[i].first.entries.size() ==
              real.transcript.sigma[i].first.entries.size());
        CHECK(ideal.transcript.sigma[i].second.class_cts.size() ==
              real.transcript.sigma[i].second.class_cts.size());
    }
}

TEST_CASE("run_ideal refuses inconsistent leakage") {
    const PlaintextModel base = small_fixture(41, 3, 3);
    DrbgRandom rng(5001);
    const RealRun real = run_real(base, harness_params(), 3, uniform_query_gen(43, base), rng);
    const SetupLeakage sl = leak_setup(real.padded, kEnc);
    QueryLeakage ql = leak_query(real.padded, real.queries, kEnc);

    // Corrupt one leaked path; the harness must notice the divergence.
    REQUIRE(!ql.paths[0].empty());
    REQUIRE(ql.paths[0][0].size() >= 2);
    std::reverse(ql.paths[0][0].begin(), ql.paths[0][0].end());
    DrbgRandom sim_rng(6001);
    CHECK_THROWS(run_ideal(sl, oracle_for(ql), context_for(real.padded), 3, sim_rng));
}

TEST_CASE("distinguisher game smoke: quiet battery, null stays null") {
    GameConfig cfg;
    cfg.rounds = 120;
    cfg.queries_per_round = 6;
    cfg.seed = 7;
    const auto reports = distinguisher_game(cfg);
    REQUIRE(reports.size() >= 5);
    for (const auto& r : reports) {
        INFO(r.name);
        // Loose small-sample bound; the acceptance suite runs the full game.
        CHECK(r.advantage <= 0.12);
        if (r.name == "uniform_guess") CHECK(r.ci_low == 0.0);
    }
}

TEST_CASE("distinguisher game flags the broken simulator") {
    GameConfig cfg;
    cfg.rounds = 120;
    cfg.queries_per_round = 6;
    cfg.seed = 9;
    cfg.broken_simulator = true;
    const auto reports = distinguisher_game(cfg);
    double best = 0.0;
    for (const auto& r : reports) best = std::max(best, r.advantage);
    CHECK(best > 0.4);
}
