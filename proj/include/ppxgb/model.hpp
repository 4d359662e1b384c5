#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ppxgb/objective.hpp"

namespace ppxgb {

// One node of a regression tree. Internal nodes compare a feature against a
// threshold ("yes" branch taken when value < threshold); the missing branch
// is taken when the query lacks the feature entirely.
struct CartNode {
    int id = 0;
    bool is_leaf = false;
    double leaf_score = 0.0;
    std::string feature;
    double threshold = 0.0;
    int yes = -1;
    int no = -1;
    int missing = -1;

    bool operator==(const CartNode&) const = default;
};

struct Cart {
    int root = 0;
    std::vector<CartNode> nodes;  // indexed via the id map below
    int depth = 0;

    const CartNode& node(int id) const;

    bool operator==(const Cart&) const = default;
};

struct PlaintextModel {
    std::vector<Cart> trees;
    Objective objective = Objective::binary_margin;
    int num_classes = 1;
    double alpha = 0.5;
    double base_score = 0.0;
};

// Partial feature map; absent features take the missing branch.
struct Query {
    std::map<std::string, double> features;

    bool operator==(const Query&) const = default;
};

struct Prediction {
    int label = 0;
    std::vector<double> probabilities;
};

// Parses the tree-dump JSON: either a bare array of nested tree objects
// (nodeid / split / split_condition / yes / no / missing / children / leaf)
// or a wrapper object {objective, num_classes, alpha, base_score, trees}.
PlaintextModel parse_model(const std::string& dump);

// Canonical wrapper serialization (keys sorted); parse . serialize . parse
// is the identity.
std::string serialize_model(const PlaintextModel& model);

std::pair<double, std::vector<int>> evaluate_tree(const Cart& tree, const Query& q);

// binary_margin: one value, base_score + sum of tree scores.
// softmax: per-class sums, tree i contributing to class i mod num_classes.
std::vector<double> evaluate_model(const PlaintextModel& model, const Query& q);

Prediction interpret(const std::vector<double>& scores, Objective objective, int num_classes,
                     double alpha);
Prediction interpret(const std::vector<double>& scores, const PlaintextModel& model);

// Pads a tree to a complete binary tree of target_depth without changing
// evaluation results. Output is canonical: level-order ids (node i has
// children 2i+1, 2i+2) with the yes branch always on the left, so the
// padded shape reveals nothing about the original one. Dummy internal nodes
// reuse a feature from feature_pool and draw thresholds uniformly from
// [threshold_lo, threshold_hi].
Cart pad_to_complete(const Cart& tree, int target_depth,
                     const std::vector<std::string>& feature_pool, double threshold_lo,
                     double threshold_hi, std::mt19937_64& rng);

// Pads every tree to the model-wide maximum depth.
PlaintextModel pad_model(const PlaintextModel& model, std::mt19937_64& rng);

// Topology + values match under the id isomorphism (ids may differ).
bool cart_structurally_equal(const Cart& a, const Cart& b);

}  // namespace ppxgb
