#pragma once

#include <random>
#include <vector>

#include "ppxgb/model.hpp"

namespace ppxgb {

// Seeded random model/query generator used by the experiments, the test
// corpus and the benchmarks.
struct FixtureSpec {
    int min_trees = 1;
    int max_trees = 20;
    int max_depth = 6;
    int num_features = 8;
    bool allow_softmax = true;   // roughly a third of seeds go multiclass
    bool root_always_splits = true;
    double split_prob = 0.7;     // chance an expandable node splits again
    double value_span = 100.0;   // thresholds and query values in [-span, span]
    double leaf_span = 1.0;
};

PlaintextModel gen_model(std::mt19937_64& rng, const FixtureSpec& spec);

std::vector<std::string> model_features(const PlaintextModel& model);

// Full query over the model's feature universe, values uniform in
// [-span, span]. With avoid_razor_edges, values within 2^-15 of any of that
// feature's thresholds in `model` are redrawn, keeping float-side and
// quantized-side comparisons in exact agreement.
Query gen_query(std::mt19937_64& rng, const PlaintextModel& model, double span,
                bool avoid_razor_edges);

}  // namespace ppxgb
