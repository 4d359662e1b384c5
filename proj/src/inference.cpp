#include "ppxgb/inference.hpp"

#include <stdexcept>

#include "ppxgb/errors.hpp"
#include "ppxgb/parallel.hpp"

namespace ppxgb {

std::pair<SheCiphertext, TraversalRecord> evaluate_encrypted_tree(const EncCart& tree,
                                                                  int tree_index,
                                                                  const EncryptedQuery& q) {
    TraversalRecord record;
    record.tree_index = tree_index;
    int id = tree.root;
    for (;;) {
        const EncNode& n = tree.node(id);
        record.path.push_back(id);
        if (n.is_leaf) return {n.score_ct, std::move(record)};
        const auto it = q.entries.find(n.pseudonym);
        if (it == q.entries.end())
            id = n.missing;
        else
            id = it->second < n.threshold_ct ? n.yes : n.no;
        if (record.path.size() > tree.nodes.size())
            throw ParseError("encrypted tree traversal exceeded node count (corrupt structure)");
    }
}

InferOutput infer(const EncryptedModel& encml, const EncryptedQuery& q, bool audit,
                  int threads) {
    if (encml.trees.empty())
        throw std::invalid_argument("infer: encrypted model has no trees");
    const int classes = encml.objective == Objective::softmax ? encml.num_classes : 1;
    if (classes < 1 || (encml.objective == Objective::softmax &&
                        encml.trees.size() % static_cast<std::size_t>(classes) != 0))
        throw std::invalid_argument("infer: tree count inconsistent with objective");

    const std::size_t n_trees = encml.trees.size();
    std::vector<SheCiphertext> leaf_cts(n_trees);
    std::vector<TraversalRecord> records(n_trees);
    const int nthreads = resolve_threads(threads);

    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n_trees; ++i)
            std::tie(leaf_cts[i], records[i]) =
                evaluate_encrypted_tree(encml.trees[i], static_cast<int>(i), q);
    } else {
        std::exception_ptr failure;
#pragma omp parallel for num_threads(nthreads) schedule(static)
        for (long i = 0; i < static_cast<long>(n_trees); ++i) {
            try {
                std::tie(leaf_cts[i], records[i]) =
                    evaluate_encrypted_tree(encml.trees[i], static_cast<int>(i), q);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    InferOutput out;
    out.result.class_cts.reserve(classes);
    for (int c = 0; c < classes; ++c) {
        // The homomorphic sum commutes, so the class-stride gather order is
        // irrelevant to the resulting ciphertext.
        std::vector<SheCiphertext> group;
        for (std::size_t i = static_cast<std::size_t>(c); i < n_trees;
             i += static_cast<std::size_t>(classes))
            group.push_back(leaf_cts[i]);
        if (group.empty())
            throw std::invalid_argument("infer: class " + std::to_string(c) + " has no trees");
        out.result.class_cts.push_back(she_eval_add(encml.she_public, group));
    }
    if (audit) out.audit = std::move(records);
    return out;
}

}  // namespace ppxgb
