#pragma once

#include <string>

#include "ppxgb/encoding.hpp"
#include "ppxgb/objective.hpp"
#include "ppxgb/ope.hpp"
#include "ppxgb/prf.hpp"
#include "ppxgb/she_private.hpp"

namespace ppxgb {

// Per-user client secrets plus the interpretation parameters. Delivered to
// the client exactly once over the provisioning channel; never co-located
// with the encrypted model in any output artifact.
struct KeyBundle {
    std::string user_id;
    OpeKey ope_key;
    PrfKey prf_key;
    ShePrivateKey she_private;
    double alpha = 0.5;
    Objective objective = Objective::binary_margin;
    int num_classes = 1;
    EncodingParams encoding;
    OpeParams ope_params;

    ShePublicKey she_public() const {
        return ShePublicKey{she_private.n, she_private.modulus_bits};
    }
};

std::string key_bundle_to_json(const KeyBundle& b);
KeyBundle key_bundle_from_json(const std::string& text);

}  // namespace ppxgb
