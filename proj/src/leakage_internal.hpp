#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppxgb/leakage.hpp"

namespace ppxgb::detail {

// Generic tree view shared by artifact-side extraction and model-side
// definition. order_value is any monotone image of the threshold
// (ciphertext or quantized plaintext); class_key is any injective image of
// the feature (pseudonym or name).
struct NodeView {
    int id = 0;
    bool is_leaf = false;
    int yes = -1, no = -1, missing = -1;
    uint64_t order_value = 0;
    std::string class_key;
};

struct TreeView {
    int root = 0;
    int depth = 0;
    std::vector<NodeView> nodes;

    const NodeView& node(int id) const;
};

SetupLeakage build_setup_leakage(const std::vector<TreeView>& trees);

std::vector<uint64_t> sorted_rank_values(const std::vector<TreeView>& trees);

// Query sequence view: per query, feature class -> comparable value.
QueryLeakage build_query_leakage(const std::vector<TreeView>& trees,
                                 const std::vector<std::map<int, uint64_t>>& queries,
                                 std::vector<std::vector<std::vector<int>>> paths);

}  // namespace ppxgb::detail
