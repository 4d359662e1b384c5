#include "ppxgb/keys.hpp"

#include <json.hpp>

#include "ppxgb/bigint.hpp"
#include "ppxgb/errors.hpp"

namespace ppxgb {

using nlohmann::json;

std::string key_bundle_to_json(const KeyBundle& b) {
    json j;
    j["user_id"] = b.user_id;
    j["ope_key"] = bytes_to_hex(b.ope_key.bytes);
    j["prf_key"] = bytes_to_hex(b.prf_key.bytes);
    j["she_private"] = json{{"n", to_hex(b.she_private.n)},
                            {"lambda", to_hex(b.she_private.lambda)},
                            {"mu", to_hex(b.she_private.mu)},
                            {"modulus_bits", b.she_private.modulus_bits}};
    j["alpha"] = b.alpha;
    j["objective"] = objective_name(b.objective);
    j["num_classes"] = b.num_classes;
    j["encoding"] = json{{"feature_scale_bits", b.encoding.feature_scale_bits},
                         {"score_scale_bits", b.encoding.score_scale_bits},
                         {"feature_domain_bits", b.encoding.feature_domain_bits},
                         {"max_leaf_terms", b.encoding.max_leaf_terms}};
    j["ope_params"] = json{{"domain_bits", b.ope_params.domain_bits},
                           {"range_bits", b.ope_params.range_bits}};
    return j.dump();
}

KeyBundle key_bundle_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("key bundle is not valid JSON: ") + e.what());
    }
    try {
        KeyBundle b;
        b.user_id = j.at("user_id").get<std::string>();
        b.ope_key.bytes = hex_to_bytes(j.at("ope_key").get<std::string>());
        b.prf_key.bytes = hex_to_bytes(j.at("prf_key").get<std::string>());
        const auto& sk = j.at("she_private");
        b.she_private.n = mpz_from_hex(sk.at("n").get<std::string>());
        b.she_private.lambda = mpz_from_hex(sk.at("lambda").get<std::string>());
        b.she_private.mu = mpz_from_hex(sk.at("mu").get<std::string>());
        b.she_private.modulus_bits = sk.at("modulus_bits").get<unsigned>();
        b.alpha = j.at("alpha").get<double>();
        b.objective = objective_from_name(j.at("objective").get<std::string>());
        b.num_classes = j.at("num_classes").get<int>();
        const auto& enc = j.at("encoding");
        b.encoding.feature_scale_bits = enc.at("feature_scale_bits").get<unsigned>();
        b.encoding.score_scale_bits = enc.at("score_scale_bits").get<unsigned>();
        b.encoding.feature_domain_bits = enc.at("feature_domain_bits").get<unsigned>();
        b.encoding.max_leaf_terms = enc.at("max_leaf_terms").get<uint64_t>();
        b.encoding.validate();
        const auto& op = j.at("ope_params");
        b.ope_params.domain_bits = op.at("domain_bits").get<unsigned>();
        b.ope_params.range_bits = op.at("range_bits").get<unsigned>();
        b.ope_params.validate();
        return b;
    } catch (const json::exception& e) {
        throw ParseError(std::string("key bundle malformed: ") + e.what());
    }
}

}  // namespace ppxgb
