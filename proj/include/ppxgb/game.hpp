#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ppxgb/experiment.hpp"
#include "ppxgb/fixtures.hpp"
#include "ppxgb/simulator.hpp"

namespace ppxgb {

// Everything a distinguisher may look at: the encrypted model, the
// transcript, and the traversal paths the server observes while executing
// the queries. No keys, no plaintext.
struct Observables {
    const EncryptedModel& encml;
    const Transcript& transcript;
    const std::vector<std::vector<TraversalRecord>>& audit;
};

// Returns 0 for "real", 1 for "ideal".
using DistinguisherFn = std::function<int(const Observables&, std::mt19937_64&)>;

struct Distinguisher {
    std::string name;
    DistinguisherFn guess;
};

// The fixed battery: a null guesser, Kolmogorov-Smirnov magnitude tests on
// threshold / query / leaf ciphertexts, a path-frequency test, a rank- and
// path-consistency check, and a transcript-shape validator.
std::vector<Distinguisher> builtin_battery();

struct GameConfig {
    std::size_t rounds = 1000;
    std::size_t queries_per_round = 12;
    uint64_t seed = 1;
    unsigned she_modulus_bits = 512;
    bool broken_simulator = false;
    int threads = 1;  // >1 runs referee rounds concurrently (same tallies)
    FixtureSpec fixture{
        .min_trees = 2,
        .max_trees = 6,
        .max_depth = 4,
        .num_features = 4,
        .allow_softmax = false,
        .root_always_splits = true,
        .split_prob = 0.8,
        .value_span = 8388607.0,  // full quantizable span: uniform plaintexts
        .leaf_span = 1.0,
    };
};

struct AdvantageReport {
    std::string name;
    std::size_t rounds = 0;
    std::size_t correct = 0;
    double advantage = 0.0;
    double ci_low = 0.0;   // 95% interval on the advantage
    double ci_high = 0.0;
};

// Referee loop: each round draws a fresh fixture model and query sequence,
// flips a fair coin, shows either the real run or the simulated one, and
// scores every distinguisher's guess. Rounds are seeded independently, so
// serial and parallel execution produce identical tallies.
std::vector<AdvantageReport> distinguisher_game(const GameConfig& config);

}  // namespace ppxgb
