#pragma once

#include <span>

#include "ppxgb/leakage.hpp"
#include "ppxgb/model.hpp"

namespace ppxgb {

// Definitional leakage functions, computed from the plaintext side. These
// must coincide exactly with what extract_setup_leakage /
// extract_query_leakage recover from a real protocol run.

// Pure function of the padded plaintext model. Carries no numeric threshold
// or leaf value, only counts, shapes and order structure. Every tree must be
// complete at its stated depth (pad first).
SetupLeakage leak_setup(const PlaintextModel& padded, const EncodingParams& encoding);

// Query pattern = equality classes of the full quantized feature maps;
// value ranks relative to the quantized thresholds; paths from plaintext
// traversal of the padded model. Queries must use model features only.
QueryLeakage leak_query(const PlaintextModel& padded, std::span<const Query> queries,
                        const EncodingParams& encoding);

}  // namespace ppxgb
