#include "ppxgb/encoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ppxgb {

void EncodingParams::validate() const {
    if (feature_scale_bits == 0 || score_scale_bits == 0 || feature_domain_bits == 0 ||
        max_leaf_terms == 0)
        throw std::invalid_argument("encoding params: all fields must be positive");
    if (feature_domain_bits <= feature_scale_bits)
        throw std::invalid_argument("encoding params: feature_domain_bits must exceed feature_scale_bits");
    if (feature_domain_bits > 63)
        throw std::invalid_argument("encoding params: feature_domain_bits above 63 unsupported");
    if (score_scale_bits >= 63)
        throw std::invalid_argument("encoding params: score_scale_bits too large for 64-bit scores");
}

double EncodingParams::feature_magnitude_bound() const {
    return std::ldexp(1.0, static_cast<int>(feature_domain_bits - feature_scale_bits - 1));
}

uint64_t quantize_feature(double x, const EncodingParams& p) {
    p.validate();
    const double bound = p.feature_magnitude_bound();
    if (!std::isfinite(x) || std::fabs(x) >= bound)
        throw std::out_of_range("feature value " + std::to_string(x) +
                                " outside quantizable domain (|x| < " + std::to_string(bound) +
                                " for " + std::to_string(p.feature_domain_bits) + "-bit domain)");
    const double scaled = x * std::ldexp(1.0, static_cast<int>(p.feature_scale_bits));
    const int64_t q = std::llround(scaled);
    const int64_t offset = int64_t(1) << (p.feature_domain_bits - 1);
    return static_cast<uint64_t>(q + offset);
}

int64_t quantize_score(double y, const EncodingParams& p) {
    p.validate();
    const double bound = std::ldexp(1.0, static_cast<int>(63 - p.score_scale_bits));
    if (!std::isfinite(y) || std::fabs(y) >= bound)
        throw std::out_of_range("score value " + std::to_string(y) +
                                " outside quantizable range (|y| < 2^" +
                                std::to_string(63 - p.score_scale_bits) + ")");
    return std::llround(y * std::ldexp(1.0, static_cast<int>(p.score_scale_bits)));
}

double dequantize_score(int64_t s, const EncodingParams& p) {
    return std::ldexp(static_cast<double>(s), -static_cast<int>(p.score_scale_bits));
}

double dequantize_score(const mpz_class& s, const EncodingParams& p) {
    return std::ldexp(s.get_d(), -static_cast<int>(p.score_scale_bits));
}

mpz_class encode_signed(int64_t v, const mpz_class& modulus, const EncodingParams& p) {
    if (modulus <= 0) throw std::invalid_argument("encode_signed: nonpositive modulus");
    mpz_class mag;
    if (v >= 0)
        mag = mpz_class(static_cast<unsigned long>(v));
    else
        mag = -mpz_class(static_cast<unsigned long>(-(v + 1))) - 1;
    mpz_class abs_mag = abs(mag);
    // Safe-summation bound: max_leaf_terms summands must stay under modulus/2.
    if (abs_mag * 2 * mpz_class(static_cast<unsigned long>(p.max_leaf_terms)) >= modulus)
        throw std::out_of_range("encode_signed: |value| too large for safe summation under modulus");
    return v >= 0 ? mag : modulus + mag;
}

mpz_class decode_signed(const mpz_class& residue, const mpz_class& modulus) {
    if (residue < 0 || residue >= modulus)
        throw std::out_of_range("decode_signed: residue outside [0, modulus)");
    if (residue * 2 > modulus) return residue - modulus;
    return residue;
}

}  // namespace ppxgb
