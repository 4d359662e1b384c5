// Command-line front end: provisioning-side operations run against local
// stores, the query client talks to a running server over HTTP.

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "ppxgb/bench.hpp"
#include "ppxgb/client.hpp"
#include "ppxgb/errors.hpp"
#include "ppxgb/fixtures.hpp"
#include "ppxgb/game.hpp"
#include "ppxgb/service.hpp"
#include "ppxgb/setup.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitCrypto = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ppxgb::IoError("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ppxgb::IoError("cannot write " + path);
    out << content;
}

ppxgb::Query query_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (!j.is_object()) throw ppxgb::ParseError("query file must be a JSON object");
    ppxgb::Query q;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw ppxgb::ParseError("query feature '" + k + "' must be numeric");
        q.features[k] = v.get<double>();
    }
    return q;
}

struct ServerUrl {
    std::string host;
    int port = 0;
};

ServerUrl parse_server(const std::string& url) {
    std::string rest = url;
    if (rest.rfind("http://", 0) == 0) rest = rest.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
        throw ppxgb::ParseError("server must look like host:port");
    ServerUrl s;
    s.host = rest.substr(0, colon);
    s.port = std::stoi(rest.substr(colon + 1));
    return s;
}

int run(int argc, char** argv) {
    CLI::App app{"ppxgb: privacy-preserving boosted-tree inference"};
    app.require_subcommand(1);

    // keygen: standalone key bundle, useful for offline tests and tooling.
    auto* keygen = app.add_subcommand("keygen", "generate a standalone key bundle");
    std::string kg_user = "user", kg_out = "bundle.json";
    unsigned kg_k = 128, kg_she_bits = 0;
    keygen->add_option("--user", kg_user, "user id");
    keygen->add_option("--k", kg_k, "security parameter (128 or 256)");
    keygen->add_option("--she-bits", kg_she_bits, "homomorphic modulus bits (default from --k)");
    keygen->add_option("--out", kg_out, "output path");

    auto* ingest = app.add_subcommand("ingest-model", "add a model dump to the store");
    std::string in_store, in_file;
    std::string in_objective;
    int in_classes = 0;
    double in_alpha = -1.0;
    ingest->add_option("--store", in_store, "model store directory")->required();
    ingest->add_option("--in", in_file, "model dump JSON file")->required();
    ingest->add_option("--objective", in_objective, "binary_margin or softmax");
    ingest->add_option("--num-classes", in_classes, "softmax class count");
    ingest->add_option("--alpha", in_alpha, "decision threshold hyper-parameter");

    auto* provision = app.add_subcommand("provision", "create a per-user encrypted model");
    std::string pr_store, pr_keys, pr_model, pr_user, pr_out = "bundle.json";
    provision->add_option("--store", pr_store, "model store directory")->required();
    provision->add_option("--keys", pr_keys, "key store directory")->required();
    provision->add_option("--model", pr_model, "model id")->required();
    provision->add_option("--user", pr_user, "user id")->required();
    provision->add_option("--out", pr_out, "where to write the client bundle");

    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    std::string sv_store, sv_keys, sv_listen = "127.0.0.1:8080", sv_log;
    bool sv_audit = false;
    serve->add_option("--store", sv_store, "model store directory")->required();
    serve->add_option("--keys", sv_keys, "key store directory")->required();
    serve->add_option("--listen", sv_listen, "host:port");
    serve->add_option("--log", sv_log, "log file (default stderr)");
    serve->add_flag("--audit", sv_audit, "include traversal paths in responses (test mode only)");

    auto* query = app.add_subcommand("query", "encrypt, send, decrypt, interpret");
    std::string q_bundle, q_file, q_server = "127.0.0.1:8080";
    query->add_option("--bundle", q_bundle, "client key bundle JSON")->required();
    query->add_option("--query", q_file, "plaintext query JSON file")->required();
    query->add_option("--server", q_server, "host:port of the service");

    auto* bench = app.add_subcommand("bench", "plaintext vs encrypted comparison");
    std::string b_model, b_out, b_dataset = "fixture";
    int b_queries = 128, b_trials = 1;
    unsigned b_she_bits = 2048;
    uint64_t b_seed = 7;
    bench->add_option("--model", b_model, "model dump JSON (omit for a generated fixture)");
    bench->add_option("--dataset", b_dataset, "label for the report");
    bench->add_option("--queries", b_queries, "corpus size (min 100)");
    bench->add_option("--trials", b_trials, "corpus passes");
    bench->add_option("--she-bits", b_she_bits, "homomorphic modulus bits");
    bench->add_option("--seed", b_seed, "fixture/query seed");
    bench->add_option("--out", b_out, "write the JSON report here");

    auto* sim = app.add_subcommand("leakage-sim", "real/ideal distinguisher battery");
    std::size_t s_rounds = 1000, s_queries = 12;
    uint64_t s_seed = 1;
    std::string s_out;
    bool s_broken = false;
    sim->add_option("--rounds", s_rounds, "game rounds (min 100)");
    sim->add_option("--queries", s_queries, "queries per round");
    sim->add_option("--seed", s_seed, "referee seed");
    sim->add_option("--out", s_out, "write the JSON report here");
    sim->add_flag("--broken-simulator", s_broken,
                  "use the deliberately broken simulator (sanity check)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (keygen->parsed()) {
        ppxgb::KeyBundle bundle;
        bundle.user_id = kg_user;
        bundle.ope_key = ppxgb::ope_keygen(kg_k);
        bundle.prf_key = ppxgb::prf_keygen(kg_k);
        const unsigned bits = kg_she_bits ? kg_she_bits : ppxgb::she_bits_for_k(kg_k);
        auto [pk, sk] = ppxgb::she_keygen_bits(bits);
        bundle.she_private = sk;
        spill(kg_out, ppxgb::key_bundle_to_json(bundle));
        std::cout << "wrote " << kg_out << "\n";
        return kExitOk;
    }

    if (ingest->parsed()) {
        std::string dump = slurp(in_file);
        if (!in_objective.empty() || in_classes > 0 || in_alpha >= 0.0) {
            ppxgb::PlaintextModel m = ppxgb::parse_model(dump);
            if (!in_objective.empty()) m.objective = ppxgb::objective_from_name(in_objective);
            if (in_classes > 0) m.num_classes = in_classes;
            if (in_alpha >= 0.0) m.alpha = in_alpha;
            dump = ppxgb::serialize_model(m);
            ppxgb::parse_model(dump);  // re-validate the adjusted wrapper
        }
        ppxgb::ServiceConfig cfg;
        cfg.model_store = in_store;
        cfg.key_store = in_store + "/.keys-unused";
        cfg.log_path = "off";
        ppxgb::Service service(cfg);
        std::cout << service.ingest_model(dump) << "\n";
        return kExitOk;
    }

    if (provision->parsed()) {
        ppxgb::ServiceConfig cfg = ppxgb::config_from_env({});
        cfg.model_store = pr_store;
        cfg.key_store = pr_keys;
        cfg.log_path = "off";
        ppxgb::Service service(cfg);
        const json resp = json::parse(service.provision(pr_model, pr_user));
        spill(pr_out, resp.at("bundle").dump());
        std::cout << "encml_id=" << resp.at("encml_id").get<std::string>() << " bundle=" << pr_out
                  << "\n";
        return kExitOk;
    }

    if (serve->parsed()) {
        const ServerUrl listen = parse_server(sv_listen);
        ppxgb::ServiceConfig cfg = ppxgb::config_from_env({});
        cfg.listen_host = listen.host;
        cfg.listen_port = listen.port;
        cfg.model_store = sv_store;
        cfg.key_store = sv_keys;
        cfg.audit = sv_audit;
        cfg.log_path = sv_log;
        ppxgb::Service service(cfg);
        service.start();
        std::cout << "listening on " << listen.host << ":" << service.port() << "\n";
        for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
    }

    if (query->parsed()) {
        const ppxgb::KeyBundle bundle = ppxgb::key_bundle_from_json(slurp(q_bundle));
        const ppxgb::Query q = query_from_json(slurp(q_file));
        const ppxgb::EncryptedQuery eq = ppxgb::encrypt_query(bundle, q);
        const ServerUrl server = parse_server(q_server);
        httplib::Client client(server.host, server.port);
        client.set_read_timeout(120, 0);
        auto res = client.Post("/v1/users/" + bundle.user_id + "/infer",
                               ppxgb::encrypted_query_to_json(eq), "application/json");
        if (!res) throw ppxgb::IoError("server unreachable");
        if (res->status != 200)
            throw ppxgb::IoError("server replied with status " + std::to_string(res->status));
        const ppxgb::EncryptedResult er = ppxgb::encrypted_result_from_json(res->body);
        const std::vector<double> scores = ppxgb::decrypt_result(bundle, er);
        const ppxgb::Prediction pred = ppxgb::interpret_result(scores, bundle);
        json out;
        out["scores"] = scores;
        out["label"] = pred.label;
        out["probabilities"] = pred.probabilities;
        std::cout << out.dump() << "\n";
        return kExitOk;
    }

    if (bench->parsed()) {
        if (b_queries < 100) throw CLI::ValidationError("--queries must be at least 100");
        std::mt19937_64 rng(b_seed);
        ppxgb::PlaintextModel model;
        if (b_model.empty()) {
            ppxgb::FixtureSpec spec;
            spec.min_trees = 50;
            spec.max_trees = 50;
            spec.max_depth = 6;
            spec.allow_softmax = false;
            model = ppxgb::gen_model(rng, spec);
        } else {
            model = ppxgb::parse_model(slurp(b_model));
        }
        std::vector<ppxgb::Query> corpus;
        for (int i = 0; i < b_queries; ++i)
            corpus.push_back(ppxgb::gen_query(rng, model, 100.0, true));
        const ppxgb::BenchReport report =
            ppxgb::bench_run(model, corpus, b_trials, b_she_bits, b_dataset);
        std::cout << ppxgb::bench_report_table(report);
        std::cout << ppxgb::bench_report_to_json(report) << "\n";
        if (!b_out.empty()) spill(b_out, ppxgb::bench_report_to_json(report));
        return kExitOk;
    }

    if (sim->parsed()) {
        ppxgb::GameConfig cfg;
        cfg.rounds = s_rounds;
        cfg.queries_per_round = s_queries;
        cfg.seed = s_seed;
        cfg.broken_simulator = s_broken;
        cfg.threads = 0;
        const auto reports = ppxgb::distinguisher_game(cfg);
        json out;
        out["rounds"] = cfg.rounds;
        out["seed"] = cfg.seed;
        out["broken_simulator"] = cfg.broken_simulator;
        json ds = json::array();
        for (const auto& r : reports) {
            std::printf("%-26s advantage=%.4f  ci=[%.4f, %.4f]  correct=%zu/%zu\n",
                        r.name.c_str(), r.advantage, r.ci_low, r.ci_high, r.correct, r.rounds);
            ds.push_back(json{{"name", r.name},
                              {"advantage", r.advantage},
                              {"ci_low", r.ci_low},
                              {"ci_high", r.ci_high},
                              {"rounds", r.rounds},
                              {"correct", r.correct}});
        }
        out["distinguishers"] = ds;
        if (!s_out.empty()) spill(s_out, out.dump());
        else std::cout << out.dump() << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const ppxgb::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCrypto;
    }
}
