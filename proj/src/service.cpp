#include "ppxgb/service.hpp"

#include <httplib.h>
#include <json.hpp>
#include <openssl/sha.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <thread>

#include "ppxgb/artifacts.hpp"
#include "ppxgb/bigint.hpp"
#include "ppxgb/errors.hpp"
#include "ppxgb/inference.hpp"
#include "ppxgb/keys.hpp"
#include "ppxgb/setup.hpp"

namespace ppxgb {

namespace fs = std::filesystem;
using nlohmann::json;

void ServiceConfig::validate() const {
    if (model_store.empty() || key_store.empty())
        throw std::invalid_argument("service config: store paths are required");
    if (fs::weakly_canonical(model_store) == fs::weakly_canonical(key_store))
        throw std::invalid_argument("service config: model store and key store must differ");
    if (audit && !test_mode)
        throw std::invalid_argument("service config: audit mode requires test mode");
}

ServiceConfig config_from_env(ServiceConfig base) {
    if (const char* v = std::getenv("PPXGB_TEST_MODE"))
        base.test_mode = std::string(v) != "0" && std::string(v) != "";
    return base;
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, const std::string& content, bool restrict_perms = false) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out << content;
    out.close();
    if (restrict_perms)
        fs::permissions(p, fs::perms::owner_read | fs::perms::owner_write,
                        fs::perm_options::replace);
}

std::string content_id(const std::string& data) {
    unsigned char md[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
    return "m-" + bytes_to_hex(md, 6);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

struct Service::Impl {
    ServiceConfig config;
    Logger log;
    httplib::Server server;
    std::thread server_thread;
    int bound_port = 0;

    std::mutex provision_mu;
    std::shared_mutex cache_mu;
    std::map<std::string, std::shared_ptr<const EncryptedModel>> cache;

    explicit Impl(ServiceConfig cfg) : config(std::move(cfg)), log(config.log_path) {
        config.validate();
        fs::create_directories(config.model_store);
        fs::create_directories(config.key_store);
    }

    fs::path model_path(const std::string& id) const {
        return fs::path(config.model_store) / "models" / (id + ".json");
    }
    fs::path encml_path(const std::string& user) const {
        return fs::path(config.model_store) / "encml" / (user + ".json");
    }
    fs::path provision_path(const std::string& user) const {
        return fs::path(config.key_store) / "provisions" / (user + ".json");
    }
    fs::path bundle_path(const std::string& user) const {
        return fs::path(config.key_store) / "bundles" / (user + ".json");
    }

    std::shared_ptr<const EncryptedModel> load_encml(const std::string& user) {
        {
            std::shared_lock lock(cache_mu);
            const auto it = cache.find(user);
            if (it != cache.end()) return it->second;
        }
        if (!fs::exists(provision_path(user))) return nullptr;
        auto model = std::make_shared<EncryptedModel>(
            encrypted_model_from_json(read_file(encml_path(user))));
        std::unique_lock lock(cache_mu);
        cache[user] = model;
        return model;
    }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

std::string Service::ingest_model(const std::string& dump_json) {
    const auto t0 = std::chrono::steady_clock::now();
    const PlaintextModel model = parse_model(dump_json);  // validate before persisting
    const std::string canonical = serialize_model(model);
    const std::string id = content_id(canonical);
    write_file(impl_->model_path(id), canonical);
    impl_->log.event("ingest_model",
                     std::map<std::string, int64_t>{
                         {"trees", static_cast<int64_t>(model.trees.size())},
                         {"bytes", static_cast<int64_t>(canonical.size())},
                         {"ms", static_cast<int64_t>(ms_since(t0))}});
    impl_->log.event("ingest_model_id", std::map<std::string, std::string>{{"model", id}});
    return id;
}

std::string Service::provision(const std::string& model_id, const std::string& user_id) {
    const auto t0 = std::chrono::steady_clock::now();
    if (user_id.empty()) throw std::invalid_argument("provision: empty user id");
    const fs::path mp = impl_->model_path(model_id);
    if (!fs::exists(mp)) throw IoError("unknown model: " + model_id);

    std::lock_guard<std::mutex> lock(impl_->provision_mu);
    if (fs::exists(impl_->provision_path(user_id)))
        throw std::runtime_error("already_provisioned: " + user_id);

    const PlaintextModel model = parse_model(read_file(mp));
    SetupParams params;
    params.k = impl_->config.security_parameter;
    params.she_modulus_bits = impl_->config.she_modulus_bits();
    params.threads = 0;  // setup encryptions may use all cores
    auto [encml, bundle] = setup_user(model, params, user_id);

    write_file(impl_->encml_path(user_id), encrypted_model_to_json(encml));
    const std::string bundle_json = key_bundle_to_json(bundle);
    // Trusted-store copy only; the bundle leaves the service exactly once,
    // over the provisioning response.
    write_file(impl_->bundle_path(user_id), bundle_json, /*restrict_perms=*/true);
    write_file(impl_->provision_path(user_id),
               json{{"model_id", model_id}, {"user_id", user_id}}.dump());
    {
        std::unique_lock cache_lock(impl_->cache_mu);
        impl_->cache.erase(user_id);
    }

    impl_->log.event("provision", std::map<std::string, std::string>{
                                      {"model", model_id},
                                      {"user", user_id},
                                      {"ms", std::to_string(static_cast<int64_t>(ms_since(t0)))}});
    return json{{"bundle", json::parse(bundle_json)}, {"encml_id", user_id}}.dump();
}

std::string Service::infer_for_user(const std::string& user_id, const std::string& query_json) {
    const auto t0 = std::chrono::steady_clock::now();
    auto encml = impl_->load_encml(user_id);
    if (!encml) throw IoError("unknown_user");
    const EncryptedQuery q = encrypted_query_from_json(query_json);
    InferOutput out = infer(*encml, q, impl_->config.audit);
    json resp = json::parse(encrypted_result_to_json(out.result));
    if (impl_->config.audit) {
        json audit = json::array();
        for (const auto& rec : out.audit)
            audit.push_back(json{{"tree", rec.tree_index}, {"path", rec.path}});
        resp["audit"] = audit;
    }
    impl_->log.event("infer", std::map<std::string, std::string>{
                                  {"user", user_id},
                                  {"status", "200"},
                                  {"ms", std::to_string(static_cast<int64_t>(ms_since(t0)))}});
    return resp.dump();
}

namespace {

void reply_error(httplib::Response& res, int status, const char* code) {
    // Constant-shape error body; no echo of request contents.
    res.status = status;
    res.set_content(json{{"error", code}}.dump(), "application/json");
}

}  // namespace

void Service::start() {
    auto& server = impl_->server;

    server.Post("/v1/models", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            const std::string id = ingest_model(req.body);
            res.set_content(json{{"model_id", id}}.dump(), "application/json");
        } catch (const ParseError&) {
            reply_error(res, 400, "bad_request");
        } catch (const std::exception&) {
            reply_error(res, 500, "internal");
        }
    });

    server.Post(R"(/v1/models/([^/]+)/users/([^/]+)/provision)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    try {
                        res.set_content(provision(req.matches[1], req.matches[2]),
                                        "application/json");
                    } catch (const IoError&) {
                        reply_error(res, 404, "unknown_model");
                    } catch (const std::runtime_error& e) {
                        if (std::string(e.what()).rfind("already_provisioned", 0) == 0)
                            reply_error(res, 409, "already_provisioned");
                        else
                            reply_error(res, 500, "internal");
                    } catch (const std::exception&) {
                        reply_error(res, 500, "internal");
                    }
                });

    server.Post(R"(/v1/users/([^/]+)/infer)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    const std::string user = req.matches[1];
                    try {
                        res.set_content(infer_for_user(user, req.body), "application/json");
                    } catch (const ParseError&) {
                        impl_->log.event("infer", std::map<std::string, std::string>{
                                                      {"user", user}, {"status", "400"}});
                        reply_error(res, 400, "bad_request");
                    } catch (const IoError&) {
                        impl_->log.event("infer", std::map<std::string, std::string>{
                                                      {"user", user}, {"status", "404"}});
                        reply_error(res, 404, "unknown_user");
                    } catch (const std::exception&) {
                        reply_error(res, 500, "internal");
                    }
                });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(json{{"status", "ok"}}.dump(), "application/json");
    });

    if (impl_->config.listen_port == 0) {
        impl_->bound_port = server.bind_to_any_port(impl_->config.listen_host);
        if (impl_->bound_port <= 0) throw IoError("cannot bind to an ephemeral port");
    } else {
        if (!server.bind_to_port(impl_->config.listen_host, impl_->config.listen_port))
            throw IoError("cannot bind to port " + std::to_string(impl_->config.listen_port));
        impl_->bound_port = impl_->config.listen_port;
    }
    impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    impl_->log.event("serve", std::map<std::string, int64_t>{{"port", impl_->bound_port}});
}

void Service::stop() {
    if (impl_->server_thread.joinable()) {
        impl_->server.stop();
        impl_->server_thread.join();
    }
}

int Service::port() const { return impl_->bound_port; }

}  // namespace ppxgb
