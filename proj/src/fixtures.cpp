#include "ppxgb/fixtures.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace ppxgb {

namespace {

int build_subtree(Cart& cart, int depth_left, bool must_split, std::mt19937_64& rng,
                  const FixtureSpec& spec, int& next_id) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int id = next_id++;
    CartNode node;
    node.id = id;
    const bool split = depth_left > 0 && (must_split || unit(rng) < spec.split_prob);
    if (!split) {
        node.is_leaf = true;
        node.leaf_score =
            std::uniform_real_distribution<double>(-spec.leaf_span, spec.leaf_span)(rng);
        cart.nodes.push_back(node);
        return id;
    }
    node.feature = "f" + std::to_string(rng() % static_cast<uint64_t>(spec.num_features));
    node.threshold =
        std::uniform_real_distribution<double>(-spec.value_span, spec.value_span)(rng);
    cart.nodes.push_back(node);
    const std::size_t slot = cart.nodes.size() - 1;
    const int yes = build_subtree(cart, depth_left - 1, false, rng, spec, next_id);
    const int no = build_subtree(cart, depth_left - 1, false, rng, spec, next_id);
    cart.nodes[slot].yes = yes;
    cart.nodes[slot].no = no;
    cart.nodes[slot].missing = (rng() & 1) ? yes : no;
    return id;
}

int subtree_depth(const Cart& cart, int id) {
    const CartNode& n = cart.node(id);
    if (n.is_leaf) return 0;
    return 1 + std::max(subtree_depth(cart, n.yes), subtree_depth(cart, n.no));
}

}  // namespace

PlaintextModel gen_model(std::mt19937_64& rng, const FixtureSpec& spec) {
    if (spec.min_trees < 1 || spec.max_trees < spec.min_trees || spec.num_features < 1)
        throw std::invalid_argument("gen_model: malformed fixture spec");
    PlaintextModel model;
    if (spec.allow_softmax && rng() % 3 == 0) {
        model.objective = Objective::softmax;
        model.num_classes = 3;
    }
    std::size_t count =
        spec.min_trees + static_cast<int>(rng() % uint64_t(spec.max_trees - spec.min_trees + 1));
    if (model.objective == Objective::softmax) {
        const std::size_t c = static_cast<std::size_t>(model.num_classes);
        count = ((count + c - 1) / c) * c;  // round up to a class multiple
    }
    for (std::size_t i = 0; i < count; ++i) {
        Cart cart;
        int next_id = 0;
        const int depth_budget = spec.max_depth == 0
                                     ? 0
                                     : 1 + static_cast<int>(rng() % uint64_t(spec.max_depth));
        cart.root = build_subtree(cart, depth_budget, spec.root_always_splits && depth_budget > 0,
                                  rng, spec, next_id);
        cart.depth = subtree_depth(cart, cart.root);
        model.trees.push_back(std::move(cart));
    }
    return model;
}

std::vector<std::string> model_features(const PlaintextModel& model) {
    std::set<std::string> names;
    for (const auto& t : model.trees)
        for (const auto& n : t.nodes)
            if (!n.is_leaf) names.insert(n.feature);
    return {names.begin(), names.end()};
}

Query gen_query(std::mt19937_64& rng, const PlaintextModel& model, double span,
                bool avoid_razor_edges) {
    // Threshold lists per feature, for the razor-edge exclusion.
    std::map<std::string, std::vector<double>> thresholds;
    for (const auto& t : model.trees)
        for (const auto& n : t.nodes)
            if (!n.is_leaf) thresholds[n.feature].push_back(n.threshold);

    const double margin = std::ldexp(1.0, -15);
    std::uniform_real_distribution<double> dist(-span, span);
    Query q;
    for (const auto& [name, cuts] : thresholds) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const double v = dist(rng);
            bool clear = true;
            if (avoid_razor_edges)
                for (double t : cuts)
                    if (std::fabs(v - t) < margin) {
                        clear = false;
                        break;
                    }
            if (clear) {
                q.features[name] = v;
                break;
            }
        }
        if (!q.features.count(name))
            throw std::runtime_error("gen_query: could not avoid razor edges for " + name);
    }
    return q;
}

}  // namespace ppxgb
