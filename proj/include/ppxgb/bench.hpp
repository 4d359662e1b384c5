#pragma once

#include <string>
#include <vector>

#include "ppxgb/model.hpp"

namespace ppxgb {

// Plaintext vs encrypted inference comparison, in the shape of the upstream
// performance table: mean latencies, on-disk artifact sizes, and their
// ratios.
struct BenchReport {
    std::string dataset;
    double plain_ms = 0.0;
    double enc_ms = 0.0;
    double slowdown_ratio = 0.0;
    std::size_t plain_model_bytes = 0;
    std::size_t enc_model_bytes = 0;
    double blowup_ratio = 0.0;
    std::size_t query_count = 0;
};

std::string bench_report_to_json(const BenchReport& r);
std::string bench_report_table(const BenchReport& r);

// Measures mean plaintext evaluate latency against mean end-to-end encrypted
// inference latency (encrypt, POST over loopback HTTP, decrypt) and the two
// artifact sizes. corpus must hold at least 100 queries; trials repeats the
// corpus passes.
BenchReport bench_run(const PlaintextModel& model, const std::vector<Query>& corpus,
                      int trials, unsigned she_modulus_bits, const std::string& dataset_name);

}  // namespace ppxgb
