#pragma once

#include <memory>
#include <string>

#include "ppxgb/log.hpp"

namespace ppxgb {

// Operational configuration for the proxy/server binary. The model store
// holds ingested plaintext dumps (proxy side, trusted) and the per-user
// encrypted models the server evaluates; the key store is the trusted
// location for provisioning records and client bundles awaiting delivery.
struct ServiceConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 0;  // 0 picks an ephemeral port
    std::string model_store;
    std::string key_store;
    unsigned security_parameter = 128;
    bool test_mode = false;  // 512-bit homomorphic modulus
    bool audit = false;      // include traversal paths in responses; implies test_mode
    std::string log_path;    // empty -> stderr, "off" -> silent

    void validate() const;
    unsigned she_modulus_bits() const { return test_mode ? 512 : 2048; }
};

// Reads PPXGB_TEST_MODE from the environment into test_mode.
ServiceConfig config_from_env(ServiceConfig base);

class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Store operations, also used directly by the CLI (no HTTP involved).
    std::string ingest_model(const std::string& dump_json);
    // Runs per-user setup, persists the encrypted model, and returns the
    // key-bundle JSON exactly once. A second provision for the same
    // (model, user) pair is a conflict, preserving per-user key freshness.
    std::string provision(const std::string& model_id, const std::string& user_id);
    std::string infer_for_user(const std::string& user_id, const std::string& query_json);

    // HTTP endpoints:
    //   POST /v1/models                               body: model dump JSON
    //   POST /v1/models/{m}/users/{u}/provision
    //   POST /v1/users/{u}/infer                      body: encrypted query JSON
    void start();
    void stop();
    int port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ppxgb
