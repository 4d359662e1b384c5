#include "ppxgb/client.hpp"

#include <stdexcept>

namespace ppxgb {

EncryptedQuery encrypt_query(const KeyBundle& bundle, const Query& q) {
    EncryptedQuery out;
    for (const auto& [name, value] : q.features) {
        uint64_t quantized;
        try {
            quantized = quantize_feature(value, bundle.encoding);
        } catch (const std::out_of_range& e) {
            throw std::out_of_range("feature '" + name + "': " + e.what());
        }
        out.entries[pseudonym(bundle.prf_key, name)] =
            ope_encrypt(bundle.ope_key, bundle.ope_params, quantized);
    }
    return out;
}

std::vector<double> decrypt_result(const KeyBundle& bundle, const EncryptedResult& r) {
    const int expected = bundle.objective == Objective::softmax ? bundle.num_classes : 1;
    if (static_cast<int>(r.class_cts.size()) != expected)
        throw std::invalid_argument("decrypt_result: expected " + std::to_string(expected) +
                                    " ciphertexts, got " + std::to_string(r.class_cts.size()));
    std::vector<double> scores;
    scores.reserve(r.class_cts.size());
    for (const auto& ct : r.class_cts) {
        const mpz_class residue = she_decrypt(bundle.she_private, ct);
        scores.push_back(dequantize_score(decode_signed(residue, bundle.she_private.n),
                                          bundle.encoding));
    }
    return scores;
}

Prediction interpret_result(const std::vector<double>& scores, const KeyBundle& bundle) {
    return interpret(scores, bundle.objective, bundle.num_classes, bundle.alpha);
}

}  // namespace ppxgb
