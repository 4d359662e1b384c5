#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ppxgb/random.hpp"

namespace ppxgb {

// Key for the feature-pseudonym PRF.
struct PrfKey {
    std::vector<uint8_t> bytes;

    bool operator==(const PrfKey&) const = default;
};

// k in {128, 256}; yields k/8 uniform bytes.
PrfKey prf_keygen(unsigned k, RandomSource& rng = system_random());

// Deterministic feature pseudonym: HMAC-SHA256(key, name) truncated to 128
// bits, rendered as 32 lowercase hex characters (valid as a JSON object key).
std::string pseudonym(const PrfKey& key, std::string_view feature_name);

}  // namespace ppxgb
