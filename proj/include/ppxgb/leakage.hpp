#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ppxgb/artifacts.hpp"

namespace ppxgb {

// Declared leakage of the protocol. Everything below is directly observable
// from the encrypted artifacts: a deterministic order-preserving scheme
// exposes the full ordering (with ties) of every threshold and query value,
// pseudonym equality exposes which nodes share a feature, and the missing
// branch direction is plain structure. The profile therefore carries the
// total rank structure rather than only the per-parent child-order bits.

// Position of a value relative to the global threshold order. `equal` means
// the value coincides with threshold rank class `rank`; otherwise it falls
// strictly between rank classes rank-1 and rank (`rank` = number of rank
// classes strictly below the value).
struct ValueRank {
    bool equal = false;
    std::size_t rank = 0;

    bool operator==(const ValueRank&) const = default;
    auto operator<=>(const ValueRank&) const = default;
};

// Internal nodes are enumerated tree-major in node-table order; all
// per-internal-node vectors below share that enumeration.
struct SetupLeakage {
    int num_trees = 0;
    std::vector<int> depths;
    // Per internal node whose children are both internal: 1 iff the yes
    // child's threshold is strictly smaller than the no child's.
    std::vector<uint8_t> child_order_bits;
    // Dense ranks over all internal thresholds; equal thresholds share a rank.
    std::vector<std::size_t> threshold_ranks;
    std::size_t rank_class_count = 0;
    // Feature-equality partition, labeled by first occurrence.
    std::vector<int> feature_classes;
    std::vector<uint8_t> missing_is_yes;

    bool operator==(const SetupLeakage&) const = default;
};

struct QueryLeakage {
    // pattern[i] = smallest j with query j equal to query i (j == i if fresh).
    std::vector<std::size_t> query_pattern;
    // Per query: present feature class -> position among thresholds.
    std::vector<std::map<int, ValueRank>> entry_ranks;
    // paths[query][tree] = root-to-leaf node ids.
    std::vector<std::vector<std::vector<int>>> paths;

    bool operator==(const QueryLeakage&) const = default;
};

// The observable conversation: encrypted queries and encrypted results in
// protocol order.
struct Transcript {
    std::vector<std::pair<EncryptedQuery, EncryptedResult>> sigma;
};

// Leakage as reconstructed from the artifacts alone (encrypted model,
// transcript, audit traversals) with no plaintext in sight. Matching these
// against the definitional leakage functions is the harness's core check.
SetupLeakage extract_setup_leakage(const EncryptedModel& encml);
QueryLeakage extract_query_leakage(const EncryptedModel& encml, const Transcript& transcript,
                                   const std::vector<std::vector<TraversalRecord>>& audit);

// Shared rank computation: position of `value` within the sorted unique
// threshold values.
ValueRank classify_value(const std::vector<uint64_t>& sorted_rank_values, uint64_t value);

}  // namespace ppxgb
