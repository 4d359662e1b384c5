#pragma once

#include <cstdint>

#include "ppxgb/bigint.hpp"

namespace ppxgb {

// Fixed-point quantization parameters. Client and proxy must agree on these
// bit-exactly, so they travel inside the key bundle and the encrypted model
// header. Features are scaled by 2^feature_scale_bits and shifted into the
// unsigned interval [0, 2^feature_domain_bits); scores are scaled by
// 2^score_scale_bits and kept signed.
struct EncodingParams {
    unsigned feature_scale_bits = 16;
    unsigned score_scale_bits = 24;
    unsigned feature_domain_bits = 40;
    uint64_t max_leaf_terms = uint64_t(1) << 16;

    void validate() const;

    // Largest representable |x| for quantize_feature (exclusive bound).
    double feature_magnitude_bound() const;

    bool operator==(const EncodingParams&) const = default;
};

// round(x * 2^feature_scale_bits) + 2^(feature_domain_bits-1).
// The half-domain offset keeps the value unsigned while preserving order.
uint64_t quantize_feature(double x, const EncodingParams& p);

// round(y * 2^score_scale_bits), signed.
int64_t quantize_score(double y, const EncodingParams& p);

// s / 2^score_scale_bits. Exact inverse of quantize_score on its image.
double dequantize_score(int64_t s, const EncodingParams& p);
double dequantize_score(const mpz_class& s, const EncodingParams& p);

// Residue embedding of signed integers in [0, modulus), with centered
// lifting on decode. |v| must stay below modulus / (2 * max_leaf_terms) so
// sums of up to max_leaf_terms residues never wrap past the midpoint.
mpz_class encode_signed(int64_t v, const mpz_class& modulus, const EncodingParams& p);
mpz_class decode_signed(const mpz_class& residue, const mpz_class& modulus);

}  // namespace ppxgb
