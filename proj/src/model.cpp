#include "ppxgb/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ppxgb/errors.hpp"

namespace ppxgb {

using nlohmann::json;

const CartNode& Cart::node(int id) const {
    // Canonical trees store node i at index i; dump-order trees need a scan.
    if (id >= 0 && static_cast<std::size_t>(id) < nodes.size() &&
        nodes[static_cast<std::size_t>(id)].id == id)
        return nodes[static_cast<std::size_t>(id)];
    for (const auto& n : nodes)
        if (n.id == id) return n;
    throw ParseError("tree references unknown node id " + std::to_string(id));
}

namespace {

void parse_node(const json& jn, Cart& cart, std::set<int>& seen, const std::string& path) {
    if (!jn.is_object()) throw ParseError("node at " + path + ": expected object");
    if (!jn.contains("nodeid") || !jn["nodeid"].is_number_integer())
        throw ParseError("node at " + path + ": missing integer 'nodeid'");
    CartNode node;
    node.id = jn["nodeid"].get<int>();
    const std::string here = path + "/" + std::to_string(node.id);
    if (!seen.insert(node.id).second)
        throw ParseError("node at " + here + ": duplicate node id");

    if (jn.contains("leaf")) {
        if (!jn["leaf"].is_number())
            throw ParseError("node at " + here + ": non-numeric 'leaf'");
        node.is_leaf = true;
        node.leaf_score = jn["leaf"].get<double>();
        cart.nodes.push_back(node);
        return;
    }

    for (const char* field : {"split", "split_condition", "yes", "no", "children"})
        if (!jn.contains(field))
            throw ParseError("node at " + here + ": missing field '" + field + "'");
    if (!jn["split"].is_string() || jn["split"].get<std::string>().empty())
        throw ParseError("node at " + here + ": 'split' must be a nonempty string");
    if (!jn["split_condition"].is_number())
        throw ParseError("node at " + here + ": non-numeric 'split_condition'");
    node.feature = jn["split"].get<std::string>();
    node.threshold = jn["split_condition"].get<double>();
    node.yes = jn["yes"].get<int>();
    node.no = jn["no"].get<int>();
    node.missing = jn.contains("missing") ? jn["missing"].get<int>() : node.yes;
    if (node.missing != node.yes && node.missing != node.no)
        throw ParseError("node at " + here + ": 'missing' must equal 'yes' or 'no'");

    const auto& children = jn["children"];
    if (!children.is_array() || children.size() != 2)
        throw ParseError("node at " + here + ": expected exactly two children");
    std::set<int> child_ids;
    for (const auto& c : children) {
        if (!c.is_object() || !c.contains("nodeid"))
            throw ParseError("node at " + here + ": malformed child");
        child_ids.insert(c["nodeid"].get<int>());
    }
    if (!child_ids.count(node.yes) || !child_ids.count(node.no))
        throw ParseError("node at " + here + ": 'yes'/'no' ids dangling from children");
    if (node.yes == node.no)
        throw ParseError("node at " + here + ": identical yes/no children");

    cart.nodes.push_back(node);
    for (const auto& c : children) parse_node(c, cart, seen, here);
}

int compute_depth(const Cart& cart, int id) {
    const CartNode& n = cart.node(id);
    if (n.is_leaf) return 0;
    return 1 + std::max(compute_depth(cart, n.yes), compute_depth(cart, n.no));
}

Cart parse_tree(const json& jt, std::size_t index) {
    Cart cart;
    std::set<int> seen;
    parse_node(jt, cart, seen, "tree " + std::to_string(index));
    cart.root = jt["nodeid"].get<int>();
    cart.depth = compute_depth(cart, cart.root);
    return cart;
}

json tree_to_json(const Cart& cart, int id) {
    const CartNode& n = cart.node(id);
    json j;
    j["nodeid"] = n.id;
    if (n.is_leaf) {
        j["leaf"] = n.leaf_score;
        return j;
    }
    j["split"] = n.feature;
    j["split_condition"] = n.threshold;
    j["yes"] = n.yes;
    j["no"] = n.no;
    j["missing"] = n.missing;
    j["children"] = json::array({tree_to_json(cart, n.yes), tree_to_json(cart, n.no)});
    return j;
}

}  // namespace

PlaintextModel parse_model(const std::string& dump) {
    json j;
    try {
        j = json::parse(dump);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model dump is not valid JSON: ") + e.what());
    }

    PlaintextModel model;
    json trees;
    if (j.is_array()) {
        trees = j;
    } else if (j.is_object() && j.contains("trees")) {
        trees = j["trees"];
        if (j.contains("objective"))
            model.objective = objective_from_name(j["objective"].get<std::string>());
        if (j.contains("num_classes")) model.num_classes = j["num_classes"].get<int>();
        if (j.contains("alpha")) model.alpha = j["alpha"].get<double>();
        if (j.contains("base_score")) model.base_score = j["base_score"].get<double>();
    } else {
        throw ParseError("model dump must be a tree array or a wrapper object with 'trees'");
    }
    if (!trees.is_array() || trees.empty())
        throw ParseError("model dump contains no trees");

    for (std::size_t i = 0; i < trees.size(); ++i)
        model.trees.push_back(parse_tree(trees[i], i));

    if (model.objective == Objective::binary_margin) {
        model.num_classes = 1;
    } else {
        if (model.num_classes < 2)
            throw ParseError("softmax objective requires num_classes >= 2");
        if (model.trees.size() % static_cast<std::size_t>(model.num_classes) != 0)
            throw ParseError("softmax objective requires tree count divisible by num_classes");
    }
    if (!std::isfinite(model.alpha) || !std::isfinite(model.base_score))
        throw ParseError("alpha/base_score must be finite");
    return model;
}

std::string serialize_model(const PlaintextModel& model) {
    json j;
    j["objective"] = objective_name(model.objective);
    j["num_classes"] = model.num_classes;
    j["alpha"] = model.alpha;
    j["base_score"] = model.base_score;
    json trees = json::array();
    for (const auto& t : model.trees) trees.push_back(tree_to_json(t, t.root));
    j["trees"] = trees;
    return j.dump();
}

std::pair<double, std::vector<int>> evaluate_tree(const Cart& tree, const Query& q) {
    std::vector<int> path;
    int id = tree.root;
    for (;;) {
        const CartNode& n = tree.node(id);
        path.push_back(id);
        if (n.is_leaf) return {n.leaf_score, path};
        const auto it = q.features.find(n.feature);
        if (it == q.features.end())
            id = n.missing;
        else
            id = it->second < n.threshold ? n.yes : n.no;
        if (path.size() > tree.nodes.size())
            throw ParseError("tree traversal exceeded node count (cycle?)");
    }
}

std::vector<double> evaluate_model(const PlaintextModel& model, const Query& q) {
    const int classes = model.objective == Objective::softmax ? model.num_classes : 1;
    std::vector<double> scores(classes, model.base_score);
    for (std::size_t i = 0; i < model.trees.size(); ++i)
        scores[i % classes] += evaluate_tree(model.trees[i], q).first;
    return scores;
}

Prediction interpret(const std::vector<double>& scores, Objective objective, int num_classes,
                     double alpha) {
    Prediction pred;
    if (objective == Objective::binary_margin) {
        if (scores.size() != 1)
            throw std::invalid_argument("interpret: binary objective expects one score");
        const double p = 1.0 / (1.0 + std::exp(-scores[0]));
        pred.probabilities = {p};
        pred.label = p > alpha ? 1 : 0;
        return pred;
    }
    if (static_cast<int>(scores.size()) != num_classes)
        throw std::invalid_argument("interpret: score count does not match num_classes");
    const double hi = *std::max_element(scores.begin(), scores.end());
    double denom = 0.0;
    for (double s : scores) denom += std::exp(s - hi);
    pred.probabilities.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        pred.probabilities[i] = std::exp(scores[i] - hi) / denom;
    // Ties break toward the lowest class index.
    pred.label = static_cast<int>(std::max_element(pred.probabilities.begin(),
                                                   pred.probabilities.end()) -
                                  pred.probabilities.begin());
    return pred;
}

Prediction interpret(const std::vector<double>& scores, const PlaintextModel& model) {
    return interpret(scores, model.objective, model.num_classes, model.alpha);
}

namespace {

void fill_complete(const Cart& src, int src_id, int slot, int levels_left, Cart& out,
                   const std::vector<std::string>& feature_pool, double threshold_lo,
                   double threshold_hi, std::mt19937_64& rng) {
    const CartNode& sn = src.node(src_id);
    CartNode& on = out.nodes[static_cast<std::size_t>(slot)];
    on.id = slot;
    if (levels_left == 0) {
        if (!sn.is_leaf)
            throw std::invalid_argument("pad_to_complete: target depth below tree depth");
        on.is_leaf = true;
        on.leaf_score = sn.leaf_score;
        return;
    }
    on.is_leaf = false;
    on.yes = 2 * slot + 1;
    on.no = 2 * slot + 2;
    if (sn.is_leaf) {
        // Dummy split: both subtrees reproduce the original leaf, so the
        // comparison outcome is irrelevant to the result.
        if (feature_pool.empty())
            throw std::invalid_argument("pad_to_complete: empty feature pool");
        on.feature = feature_pool[rng() % feature_pool.size()];
        on.threshold = std::uniform_real_distribution<double>(threshold_lo, threshold_hi)(rng);
        on.missing = (rng() & 1) ? on.yes : on.no;
        fill_complete(src, src_id, on.yes, levels_left - 1, out, feature_pool, threshold_lo,
                      threshold_hi, rng);
        fill_complete(src, src_id, on.no, levels_left - 1, out, feature_pool, threshold_lo,
                      threshold_hi, rng);
        return;
    }
    on.feature = sn.feature;
    on.threshold = sn.threshold;
    on.missing = sn.missing == sn.yes ? on.yes : on.no;
    fill_complete(src, sn.yes, on.yes, levels_left - 1, out, feature_pool, threshold_lo,
                  threshold_hi, rng);
    fill_complete(src, sn.no, on.no, levels_left - 1, out, feature_pool, threshold_lo,
                  threshold_hi, rng);
}

}  // namespace

Cart pad_to_complete(const Cart& tree, int target_depth,
                     const std::vector<std::string>& feature_pool, double threshold_lo,
                     double threshold_hi, std::mt19937_64& rng) {
    if (target_depth < tree.depth)
        throw std::invalid_argument("pad_to_complete: target depth " +
                                    std::to_string(target_depth) + " below tree depth " +
                                    std::to_string(tree.depth));
    Cart out;
    out.root = 0;
    out.depth = target_depth;
    out.nodes.resize((std::size_t(1) << (target_depth + 1)) - 1);
    fill_complete(tree, tree.root, 0, target_depth, out, feature_pool, threshold_lo,
                  threshold_hi, rng);
    return out;
}

PlaintextModel pad_model(const PlaintextModel& model, std::mt19937_64& rng) {
    int max_depth = 0;
    std::set<std::string> features;
    double lo = 0.0, hi = 0.0;
    bool have_threshold = false;
    for (const auto& t : model.trees) {
        max_depth = std::max(max_depth, t.depth);
        for (const auto& n : t.nodes) {
            if (n.is_leaf) continue;
            features.insert(n.feature);
            if (!have_threshold) {
                lo = hi = n.threshold;
                have_threshold = true;
            } else {
                lo = std::min(lo, n.threshold);
                hi = std::max(hi, n.threshold);
            }
        }
    }
    std::vector<std::string> pool(features.begin(), features.end());
    PlaintextModel out = model;
    for (auto& t : out.trees) t = pad_to_complete(t, max_depth, pool, lo, hi, rng);
    return out;
}

namespace {

bool subtree_equal(const Cart& a, int ida, const Cart& b, int idb) {
    const CartNode& na = a.node(ida);
    const CartNode& nb = b.node(idb);
    if (na.is_leaf != nb.is_leaf) return false;
    if (na.is_leaf) return na.leaf_score == nb.leaf_score;
    if (na.feature != nb.feature || na.threshold != nb.threshold) return false;
    if ((na.missing == na.yes) != (nb.missing == nb.yes)) return false;
    return subtree_equal(a, na.yes, b, nb.yes) && subtree_equal(a, na.no, b, nb.no);
}

}  // namespace

bool cart_structurally_equal(const Cart& a, const Cart& b) {
    return a.nodes.size() == b.nodes.size() && subtree_equal(a, a.root, b, b.root);
}

}  // namespace ppxgb
