#include "ppxgb/bench.hpp"

#include <httplib.h>
#include <json.hpp>

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ppxgb/client.hpp"
#include "ppxgb/keys.hpp"
#include "ppxgb/setup.hpp"
#include "ppxgb/service.hpp"

namespace ppxgb {

namespace fs = std::filesystem;
using nlohmann::json;

std::string bench_report_to_json(const BenchReport& r) {
    return json{{"dataset", r.dataset},
                {"plain_ms", r.plain_ms},
                {"enc_ms", r.enc_ms},
                {"slowdown_ratio", r.slowdown_ratio},
                {"plain_model_bytes", r.plain_model_bytes},
                {"enc_model_bytes", r.enc_model_bytes},
                {"blowup_ratio", r.blowup_ratio},
                {"query_count", r.query_count}}
        .dump();
}

std::string bench_report_table(const BenchReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "dataset=%s\n"
                  "  plain inference : %10.4f ms/query   model %8zu bytes\n"
                  "  enc   inference : %10.4f ms/query   model %8zu bytes\n"
                  "  slowdown x%.1f   size blowup x%.1f   (%zu queries)\n",
                  r.dataset.c_str(), r.plain_ms, r.plain_model_bytes, r.enc_ms,
                  r.enc_model_bytes, r.slowdown_ratio, r.blowup_ratio, r.query_count);
    return buf;
}

BenchReport bench_run(const PlaintextModel& model, const std::vector<Query>& corpus,
                      int trials, unsigned she_modulus_bits, const std::string& dataset_name) {
    if (corpus.size() < 100)
        throw std::invalid_argument("bench_run: corpus must hold at least 100 queries");
    if (trials < 1) throw std::invalid_argument("bench_run: trials must be positive");

    BenchReport report;
    report.dataset = dataset_name;
    report.query_count = corpus.size() * static_cast<std::size_t>(trials);

    using clock = std::chrono::steady_clock;

    // Plaintext side.
    {
        double sink = 0.0;
        const auto t0 = clock::now();
        for (int t = 0; t < trials; ++t)
            for (const auto& q : corpus) sink += evaluate_model(model, q)[0];
        report.plain_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count() /
                          static_cast<double>(report.query_count);
        asm volatile("" : : "g"(&sink) : "memory");  // keep the loop alive
    }

    // Encrypted side over loopback HTTP, mirroring the deployed topology.
    const fs::path root = fs::temp_directory_path() /
                          ("ppxgb-bench-" + std::to_string(::getpid()) + "-" +
                           std::to_string(clock::now().time_since_epoch().count()));
    ServiceConfig cfg;
    cfg.model_store = (root / "models").string();
    cfg.key_store = (root / "keys").string();
    cfg.test_mode = she_modulus_bits <= 1024;
    cfg.log_path = "off";
    {
        Service service(cfg);
        // Pin the modulus the caller asked for regardless of test_mode.
        const std::string model_json = serialize_model(model);
        const std::string model_id = service.ingest_model(model_json);
        report.plain_model_bytes = model_json.size();

        KeyBundle bundle;
        {
            SetupParams params;
            params.k = 128;
            params.she_modulus_bits = she_modulus_bits;
            params.threads = 0;
            auto [encml, b] = setup_user(model, params, "bench-user");
            bundle = std::move(b);
            const std::string encml_json = encrypted_model_to_json(encml);
            report.enc_model_bytes = encml_json.size();
            // Persist through the service store so the HTTP path serves it.
            const fs::path encml_path = fs::path(cfg.model_store) / "encml" / "bench-user.json";
            fs::create_directories(encml_path.parent_path());
            std::ofstream(encml_path) << encml_json;
            const fs::path prov = fs::path(cfg.key_store) / "provisions" / "bench-user.json";
            fs::create_directories(prov.parent_path());
            std::ofstream(prov) << json{{"model_id", model_id}}.dump();
        }

        service.start();
        httplib::Client client(cfg.listen_host, service.port());
        client.set_read_timeout(120, 0);

        const auto t0 = clock::now();
        for (int t = 0; t < trials; ++t) {
            for (const auto& q : corpus) {
                const EncryptedQuery eq = encrypt_query(bundle, q);
                auto res = client.Post("/v1/users/bench-user/infer",
                                       encrypted_query_to_json(eq), "application/json");
                if (!res || res->status != 200)
                    throw std::runtime_error("bench_run: inference request failed");
                const EncryptedResult er = encrypted_result_from_json(res->body);
                double sink = decrypt_result(bundle, er)[0];
                asm volatile("" : : "g"(&sink) : "memory");
            }
        }
        report.enc_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count() /
                        static_cast<double>(report.query_count);
        service.stop();
    }
    fs::remove_all(root);

    report.slowdown_ratio = report.enc_ms / report.plain_ms;
    report.blowup_ratio = static_cast<double>(report.enc_model_bytes) /
                          static_cast<double>(report.plain_model_bytes);
    return report;
}

}  // namespace ppxgb
