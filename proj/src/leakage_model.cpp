#include "ppxgb/leakage_model.hpp"

#include <set>
#include <stdexcept>

#include "leakage_internal.hpp"

namespace ppxgb {

namespace {

void require_complete(const Cart& t) {
    // Every leaf must sit at the tree's stated depth.
    const std::size_t expected = (std::size_t(1) << (t.depth + 1)) - 1;
    if (t.nodes.size() != expected)
        throw std::invalid_argument("leakage: model must be padded to complete trees first");
}

std::vector<detail::TreeView> views_from_model(const PlaintextModel& model,
                                               const EncodingParams& encoding) {
    std::vector<detail::TreeView> views;
    views.reserve(model.trees.size());
    for (const auto& t : model.trees) {
        require_complete(t);
        detail::TreeView v;
        v.root = t.root;
        v.depth = t.depth;
        for (const auto& n : t.nodes) {
            detail::NodeView nv;
            nv.id = n.id;
            nv.is_leaf = n.is_leaf;
            nv.yes = n.yes;
            nv.no = n.no;
            nv.missing = n.missing;
            if (!n.is_leaf) {
                nv.order_value = quantize_feature(n.threshold, encoding);
                nv.class_key = n.feature;
            }
            v.nodes.push_back(std::move(nv));
        }
        views.push_back(std::move(v));
    }
    return views;
}

}  // namespace

SetupLeakage leak_setup(const PlaintextModel& padded, const EncodingParams& encoding) {
    return detail::build_setup_leakage(views_from_model(padded, encoding));
}

namespace {

// Root-to-leaf walk under quantized comparison semantics: this is the path
// the protocol actually takes (and leaks), which can differ from the
// float-side traversal only inside the quantization tie zone.
std::vector<int> quantized_path(const detail::TreeView& tree,
                                const std::map<std::string, uint64_t>& entries) {
    std::vector<int> path;
    int id = tree.root;
    for (;;) {
        const detail::NodeView& n = tree.node(id);
        path.push_back(id);
        if (n.is_leaf) return path;
        const auto it = entries.find(n.class_key);
        if (it == entries.end())
            id = n.missing;
        else
            id = it->second < n.order_value ? n.yes : n.no;
    }
}

}  // namespace

QueryLeakage leak_query(const PlaintextModel& padded, std::span<const Query> queries,
                        const EncodingParams& encoding) {
    if (queries.empty()) throw std::invalid_argument("leak_query: empty query sequence");
    const std::vector<detail::TreeView> views = views_from_model(padded, encoding);

    std::map<std::string, int> class_ids;
    for (const auto& t : padded.trees)
        for (const auto& n : t.nodes)
            if (!n.is_leaf) class_ids.emplace(n.feature, static_cast<int>(class_ids.size()));

    std::vector<std::map<int, uint64_t>> quantized;
    std::vector<std::vector<std::vector<int>>> paths;
    for (const auto& q : queries) {
        std::map<int, uint64_t> entry;
        std::map<std::string, uint64_t> by_name;
        for (const auto& [name, value] : q.features) {
            const auto it = class_ids.find(name);
            if (it == class_ids.end())
                throw std::invalid_argument(
                    "leak_query: query feature '" + name +
                    "' absent from the model (harness queries must stay within the model's "
                    "feature universe)");
            const uint64_t quantum = quantize_feature(value, encoding);
            entry[it->second] = quantum;
            by_name[name] = quantum;
        }
        quantized.push_back(std::move(entry));
        std::vector<std::vector<int>> per_tree;
        per_tree.reserve(views.size());
        for (const auto& v : views) per_tree.push_back(quantized_path(v, by_name));
        paths.push_back(std::move(per_tree));
    }
    return detail::build_query_leakage(views, quantized, std::move(paths));
}

}  // namespace ppxgb
