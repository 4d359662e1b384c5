#pragma once

#include <vector>

#include "ppxgb/artifacts.hpp"
#include "ppxgb/keys.hpp"
#include "ppxgb/model.hpp"

namespace ppxgb {

// Client-side query encryption: one entry per present feature,
// pseudonym(prf_key, name) -> ope_encrypt(ope_key, quantize(value)).
// Absent features stay absent (missing semantics). Deterministic by
// construction, so equal queries produce byte-identical wire objects.
EncryptedQuery encrypt_query(const KeyBundle& bundle, const Query& q);

// Decrypt-and-decode each class ciphertext back to a real-valued score.
std::vector<double> decrypt_result(const KeyBundle& bundle, const EncryptedResult& r);

Prediction interpret_result(const std::vector<double>& scores, const KeyBundle& bundle);

}  // namespace ppxgb
