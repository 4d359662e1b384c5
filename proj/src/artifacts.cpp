#include "ppxgb/artifacts.hpp"

#include <json.hpp>

#include <charconv>

#include "ppxgb/bigint.hpp"
#include "ppxgb/errors.hpp"

namespace ppxgb {

using nlohmann::json;

const EncNode& EncCart::node(int id) const {
    if (id >= 0 && static_cast<std::size_t>(id) < nodes.size() &&
        nodes[static_cast<std::size_t>(id)].id == id)
        return nodes[static_cast<std::size_t>(id)];
    for (const auto& n : nodes)
        if (n.id == id) return n;
    throw ParseError("encrypted tree references unknown node id " + std::to_string(id));
}

namespace {

std::string u64_to_dec(uint64_t v) { return std::to_string(v); }

uint64_t dec_to_u64(const std::string& s) {
    uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("malformed decimal ciphertext: " + s);
    return v;
}

json encoding_to_json(const EncodingParams& p) {
    return json{{"feature_scale_bits", p.feature_scale_bits},
                {"score_scale_bits", p.score_scale_bits},
                {"feature_domain_bits", p.feature_domain_bits},
                {"max_leaf_terms", p.max_leaf_terms}};
}

EncodingParams encoding_from_json(const json& j) {
    EncodingParams p;
    p.feature_scale_bits = j.at("feature_scale_bits").get<unsigned>();
    p.score_scale_bits = j.at("score_scale_bits").get<unsigned>();
    p.feature_domain_bits = j.at("feature_domain_bits").get<unsigned>();
    p.max_leaf_terms = j.at("max_leaf_terms").get<uint64_t>();
    p.validate();
    return p;
}

json ope_params_to_json(const OpeParams& p) {
    return json{{"domain_bits", p.domain_bits}, {"range_bits", p.range_bits}};
}

OpeParams ope_params_from_json(const json& j) {
    OpeParams p;
    p.domain_bits = j.at("domain_bits").get<unsigned>();
    p.range_bits = j.at("range_bits").get<unsigned>();
    p.validate();
    return p;
}

json enc_node_to_json(const EncNode& n) {
    json j;
    j["id"] = n.id;
    if (n.is_leaf) {
        j["score_ct"] = to_hex(n.score_ct.value);
        return j;
    }
    j["pseudonym"] = n.pseudonym;
    j["threshold_ct"] = u64_to_dec(n.threshold_ct.value);
    j["yes"] = n.yes;
    j["no"] = n.no;
    j["missing"] = n.missing;
    return j;
}

EncNode enc_node_from_json(const json& j) {
    EncNode n;
    n.id = j.at("id").get<int>();
    if (j.contains("score_ct")) {
        n.is_leaf = true;
        n.score_ct.value = mpz_from_hex(j["score_ct"].get<std::string>());
        return n;
    }
    n.pseudonym = j.at("pseudonym").get<std::string>();
    n.threshold_ct.value = dec_to_u64(j.at("threshold_ct").get<std::string>());
    n.yes = j.at("yes").get<int>();
    n.no = j.at("no").get<int>();
    n.missing = j.at("missing").get<int>();
    if (n.missing != n.yes && n.missing != n.no)
        throw ParseError("encrypted node: 'missing' must equal 'yes' or 'no'");
    return n;
}

}  // namespace

std::string encrypted_model_to_json(const EncryptedModel& m) {
    json j;
    j["version"] = m.version;
    j["user_id"] = m.user_id;
    j["she_public"] = json{{"n", to_hex(m.she_public.n)},
                           {"modulus_bits", m.she_public.modulus_bits}};
    j["objective"] = objective_name(m.objective);
    j["num_classes"] = m.num_classes;
    j["encoding"] = encoding_to_json(m.encoding);
    j["ope_params"] = ope_params_to_json(m.ope_params);
    json trees = json::array();
    for (const auto& t : m.trees) {
        json jt;
        jt["root"] = t.root;
        jt["depth"] = t.depth;
        json nodes = json::array();
        for (const auto& n : t.nodes) nodes.push_back(enc_node_to_json(n));
        jt["nodes"] = nodes;
        trees.push_back(jt);
    }
    j["trees"] = trees;
    return j.dump();
}

EncryptedModel encrypted_model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("encrypted model is not valid JSON: ") + e.what());
    }
    try {
        EncryptedModel m;
        m.version = j.at("version").get<int>();
        m.user_id = j.at("user_id").get<std::string>();
        m.she_public.n = mpz_from_hex(j.at("she_public").at("n").get<std::string>());
        m.she_public.modulus_bits = j.at("she_public").at("modulus_bits").get<unsigned>();
        m.objective = objective_from_name(j.at("objective").get<std::string>());
        m.num_classes = j.at("num_classes").get<int>();
        m.encoding = encoding_from_json(j.at("encoding"));
        m.ope_params = ope_params_from_json(j.at("ope_params"));
        for (const auto& jt : j.at("trees")) {
            EncCart t;
            t.root = jt.at("root").get<int>();
            t.depth = jt.at("depth").get<int>();
            for (const auto& jn : jt.at("nodes")) t.nodes.push_back(enc_node_from_json(jn));
            m.trees.push_back(std::move(t));
        }
        if (m.trees.empty()) throw ParseError("encrypted model contains no trees");
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("encrypted model malformed: ") + e.what());
    }
}

std::string encrypted_query_to_json(const EncryptedQuery& q) {
    json entries = json::object();
    for (const auto& [pseudo, ct] : q.entries) entries[pseudo] = u64_to_dec(ct.value);
    return json{{"entries", entries}}.dump();
}

EncryptedQuery encrypted_query_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("encrypted query is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_object())
        throw ParseError("encrypted query must be an object with 'entries'");
    EncryptedQuery q;
    for (const auto& [k, v] : j["entries"].items()) {
        if (!v.is_string()) throw ParseError("encrypted query entries must be decimal strings");
        q.entries[k] = OpeCiphertext{dec_to_u64(v.get<std::string>())};
    }
    return q;
}

std::string encrypted_result_to_json(const EncryptedResult& r) {
    json cts = json::array();
    for (const auto& c : r.class_cts) cts.push_back(to_hex(c.value));
    return json{{"class_cts", cts}}.dump();
}

EncryptedResult encrypted_result_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("encrypted result is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("class_cts") || !j["class_cts"].is_array() ||
        j["class_cts"].empty())
        throw ParseError("encrypted result must carry a nonempty 'class_cts' array");
    EncryptedResult r;
    for (const auto& c : j["class_cts"]) {
        if (!c.is_string()) throw ParseError("encrypted result ciphertexts must be hex strings");
        r.class_cts.push_back(SheCiphertext{mpz_from_hex(c.get<std::string>())});
    }
    return r;
}

}  // namespace ppxgb
