// Serial-vs-OpenMP comparison for the three parallel kernels: setup-time
// node encryption, per-tree encrypted inference, and distinguisher-game
// rounds. The serial path is the reference implementation the unit tests
// check the parallel path against.

#include <chrono>
#include <cstdio>
#include <random>

#include "ppxgb/client.hpp"
#include "ppxgb/fixtures.hpp"
#include "ppxgb/game.hpp"
#include "ppxgb/inference.hpp"
#include "ppxgb/parallel.hpp"
#include "ppxgb/setup.hpp"

using namespace ppxgb;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void report(const char* kernel, double serial_ms, double parallel_ms, int threads) {
    std::printf("%-22s serial %9.2f ms   %d-thread %9.2f ms   speedup x%.2f\n", kernel,
                serial_ms, threads, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    const int threads = resolve_threads(0);
    std::printf("hardware threads available: %d\n", threads);

    std::mt19937_64 rng(42);
    FixtureSpec spec;
    spec.min_trees = quick ? 8 : 24;
    spec.max_trees = spec.min_trees;
    spec.max_depth = quick ? 4 : 6;
    spec.allow_softmax = false;
    const PlaintextModel model = gen_model(rng, spec);

    SetupParams params;
    params.k = 128;
    params.she_modulus_bits = 512;

    // Kernel 1: setup-time node encryption.
    params.threads = 1;
    auto t0 = clock_type::now();
    auto [encml_serial, bundle] = setup_user(model, params, "bench");
    const double setup_serial = ms_since(t0);
    params.threads = 0;
    t0 = clock_type::now();
    auto [encml_parallel, bundle2] = setup_user(model, params, "bench");
    const double setup_parallel = ms_since(t0);
    report("setup encryption", setup_serial, setup_parallel, threads);

    // Kernel 2: encrypted inference across trees.
    const int infer_reps = quick ? 50 : 400;
    std::vector<EncryptedQuery> queries;
    for (int i = 0; i < 16; ++i)
        queries.push_back(encrypt_query(bundle, gen_query(rng, model, 100.0, false)));
    t0 = clock_type::now();
    for (int i = 0; i < infer_reps; ++i) infer(encml_serial, queries[i % 16], false, 1);
    const double infer_serial = ms_since(t0);
    t0 = clock_type::now();
    for (int i = 0; i < infer_reps; ++i) infer(encml_serial, queries[i % 16], false, 0);
    const double infer_parallel = ms_since(t0);
    report("encrypted inference", infer_serial, infer_parallel, threads);

    // Kernel 3: distinguisher-game rounds.
    GameConfig game;
    game.rounds = quick ? 100 : 300;
    game.queries_per_round = 8;
    game.seed = 11;
    game.threads = 1;
    t0 = clock_type::now();
    distinguisher_game(game);
    const double game_serial = ms_since(t0);
    game.threads = 0;
    t0 = clock_type::now();
    distinguisher_game(game);
    const double game_parallel = ms_since(t0);
    report("distinguisher rounds", game_serial, game_parallel, threads);
    return 0;
}
