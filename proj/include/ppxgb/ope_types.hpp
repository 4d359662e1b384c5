#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>

namespace ppxgb {

// Plaintext/ciphertext interval sizes for the order-preserving scheme.
// range_bits must be strictly larger than domain_bits: a random
// order-preserving injection needs room between image points.
struct OpeParams {
    unsigned domain_bits = 40;
    unsigned range_bits = 64;

    void validate() const {
        if (domain_bits == 0 || domain_bits > 62)
            throw std::invalid_argument("ope params: domain_bits must be in [1, 62]");
        if (range_bits <= domain_bits || range_bits > 64)
            throw std::invalid_argument("ope params: range_bits must be in (domain_bits, 64]");
    }

    bool operator==(const OpeParams&) const = default;
};

struct OpeCiphertext {
    uint64_t value = 0;

    auto operator<=>(const OpeCiphertext&) const = default;
};

}  // namespace ppxgb
