#include "ppxgb/leakage.hpp"

#include <algorithm>
#include <stdexcept>

#include "leakage_internal.hpp"

namespace ppxgb {

namespace detail {

const NodeView& TreeView::node(int id) const {
    if (id >= 0 && static_cast<std::size_t>(id) < nodes.size() &&
        nodes[static_cast<std::size_t>(id)].id == id)
        return nodes[static_cast<std::size_t>(id)];
    for (const auto& n : nodes)
        if (n.id == id) return n;
    throw std::invalid_argument("leakage: dangling node id");
}

SetupLeakage build_setup_leakage(const std::vector<TreeView>& trees) {
    SetupLeakage L;
    L.num_trees = static_cast<int>(trees.size());
    std::vector<uint64_t> values;
    std::map<std::string, int> class_ids;
    for (const auto& t : trees) {
        L.depths.push_back(t.depth);
        for (const auto& n : t.nodes) {
            if (n.is_leaf) continue;
            values.push_back(n.order_value);
            const auto it =
                class_ids.emplace(n.class_key, static_cast<int>(class_ids.size())).first;
            L.feature_classes.push_back(it->second);
            L.missing_is_yes.push_back(n.missing == n.yes ? 1 : 0);
            const NodeView& ynode = t.node(n.yes);
            const NodeView& nnode = t.node(n.no);
            if (!ynode.is_leaf && !nnode.is_leaf)
                L.child_order_bits.push_back(ynode.order_value < nnode.order_value ? 1 : 0);
        }
    }
    std::vector<uint64_t> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    L.rank_class_count = sorted.size();
    L.threshold_ranks.reserve(values.size());
    for (uint64_t v : values)
        L.threshold_ranks.push_back(static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
    return L;
}

std::vector<uint64_t> sorted_rank_values(const std::vector<TreeView>& trees) {
    std::vector<uint64_t> values;
    for (const auto& t : trees)
        for (const auto& n : t.nodes)
            if (!n.is_leaf) values.push_back(n.order_value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

QueryLeakage build_query_leakage(const std::vector<TreeView>& trees,
                                 const std::vector<std::map<int, uint64_t>>& queries,
                                 std::vector<std::vector<std::vector<int>>> paths) {
    QueryLeakage L;
    const std::vector<uint64_t> ranks = sorted_rank_values(trees);
    L.paths = std::move(paths);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        std::size_t first = i;
        for (std::size_t j = 0; j < i; ++j)
            if (queries[j] == queries[i]) {
                first = j;
                break;
            }
        L.query_pattern.push_back(first);
        std::map<int, ValueRank> entry;
        for (const auto& [cls, value] : queries[i]) entry[cls] = classify_value(ranks, value);
        L.entry_ranks.push_back(std::move(entry));
    }
    return L;
}

}  // namespace detail

namespace {

std::vector<detail::TreeView> views_from_encrypted(const EncryptedModel& encml) {
    std::vector<detail::TreeView> views;
    views.reserve(encml.trees.size());
    for (const auto& t : encml.trees) {
        detail::TreeView v;
        v.root = t.root;
        v.depth = t.depth;
        for (const auto& n : t.nodes)
            v.nodes.push_back(detail::NodeView{n.id, n.is_leaf, n.yes, n.no, n.missing,
                                               n.threshold_ct.value, n.pseudonym});
        views.push_back(std::move(v));
    }
    return views;
}

}  // namespace

ValueRank classify_value(const std::vector<uint64_t>& sorted_values, uint64_t value) {
    const auto it = std::lower_bound(sorted_values.begin(), sorted_values.end(), value);
    const auto idx = static_cast<std::size_t>(it - sorted_values.begin());
    if (it != sorted_values.end() && *it == value) return ValueRank{true, idx};
    return ValueRank{false, idx};
}

SetupLeakage extract_setup_leakage(const EncryptedModel& encml) {
    return detail::build_setup_leakage(views_from_encrypted(encml));
}

QueryLeakage extract_query_leakage(const EncryptedModel& encml, const Transcript& transcript,
                                   const std::vector<std::vector<TraversalRecord>>& audit) {
    if (audit.size() != transcript.sigma.size())
        throw std::invalid_argument("extract_query_leakage: audit/transcript length mismatch");
    const std::vector<detail::TreeView> views = views_from_encrypted(encml);

    // Map pseudonyms to feature classes by first occurrence, mirroring the
    // setup-leakage labeling.
    std::map<std::string, int> class_ids;
    for (const auto& v : views)
        for (const auto& n : v.nodes)
            if (!n.is_leaf) class_ids.emplace(n.class_key, static_cast<int>(class_ids.size()));

    std::vector<std::map<int, uint64_t>> queries;
    for (const auto& [query, result] : transcript.sigma) {
        std::map<int, uint64_t> entry;
        for (const auto& [pseudo, ct] : query.entries) {
            const auto it = class_ids.find(pseudo);
            if (it == class_ids.end())
                throw std::invalid_argument(
                    "extract_query_leakage: query pseudonym absent from the encrypted model "
                    "(harness queries must stay within the model's feature universe)");
            entry[it->second] = ct.value;
        }
        queries.push_back(std::move(entry));
    }

    std::vector<std::vector<std::vector<int>>> paths;
    paths.reserve(audit.size());
    for (const auto& records : audit) {
        std::vector<std::vector<int>> per_tree;
        per_tree.reserve(records.size());
        for (const auto& r : records) per_tree.push_back(r.path);
        paths.push_back(std::move(per_tree));
    }
    return detail::build_query_leakage(views, queries, std::move(paths));
}

}  // namespace ppxgb
