#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ppxgb/encoding.hpp"

using namespace ppxgb;

namespace {
const EncodingParams kDefaults{};
}

TEST_CASE("quantize_feature maps zero to the domain midpoint") {
    CHECK(quantize_feature(0.0, kDefaults) == (uint64_t(1) << 39));
}

TEST_CASE("quantize_feature matches the independent integer computation") {
    // 1.5 * 2^16 computed exactly as 3 * 2^15 in integer arithmetic.
    const uint64_t scaled = uint64_t(3) << 15;
    CHECK(scaled == 98304);
    CHECK(quantize_feature(1.5, kDefaults) == (uint64_t(1) << 39) + scaled);
    CHECK(quantize_feature(-1.5, kDefaults) == (uint64_t(1) << 39) - scaled);
}

TEST_CASE("quantize_feature is strictly monotone for gaps of one quantum") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-8.0e6, 8.0e6);
    const double quantum = std::ldexp(1.0, -16);
    for (int i = 0; i < 20000; ++i) {
        double a = dist(rng);
        double gap = quantum * (1.0 + std::uniform_real_distribution<double>(0, 10)(rng));
        double b = a + gap;
        if (std::fabs(b) >= kDefaults.feature_magnitude_bound()) continue;
        CHECK(quantize_feature(a, kDefaults) < quantize_feature(b, kDefaults));
    }
}

TEST_CASE("quantize_feature rejects out-of-domain values") {
    CHECK_THROWS_AS(quantize_feature(9.0e6, kDefaults), std::out_of_range);
    CHECK_THROWS_AS(quantize_feature(-9.0e6, kDefaults), std::out_of_range);
    CHECK_THROWS_AS(quantize_feature(std::nan(""), kDefaults), std::out_of_range);
}

TEST_CASE("quantize_score fixed values") {
    CHECK(quantize_score(0.0, kDefaults) == 0);
    // -0.5 * 2^24 computed independently as -(2^23).
    CHECK(quantize_score(-0.5, kDefaults) == -(int64_t(1) << 23));
    CHECK_THROWS_AS(quantize_score(1.0e12, kDefaults), std::out_of_range);
}

TEST_CASE("dequantize_score fixed values and linearity") {
    CHECK(dequantize_score(int64_t(0), kDefaults) == 0.0);
    CHECK(dequantize_score(int64_t(1) << 23, kDefaults) == 0.5);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
        const int64_t a = static_cast<int64_t>(rng() % (uint64_t(1) << 40)) - (int64_t(1) << 39);
        const int64_t b = static_cast<int64_t>(rng() % (uint64_t(1) << 40)) - (int64_t(1) << 39);
        CHECK(dequantize_score(a + b, kDefaults) ==
              dequantize_score(a, kDefaults) + dequantize_score(b, kDefaults));
    }
}

TEST_CASE("quantize/dequantize round-trips on the image") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const int64_t s = static_cast<int64_t>(rng() % (uint64_t(1) << 50)) - (int64_t(1) << 49);
        CHECK(quantize_score(dequantize_score(s, kDefaults), kDefaults) == s);
    }
    std::uniform_real_distribution<double> dist(-1000.0, 1000.0);
    const double half_quantum = std::ldexp(1.0, -25);
    for (int i = 0; i < 1000; ++i) {
        const double y = dist(rng);
        const double back = dequantize_score(quantize_score(y, kDefaults), kDefaults);
        CHECK(std::fabs(back - y) <= half_quantum);
    }
}

TEST_CASE("encode_signed basics and bounds") {
    const mpz_class n("340282366920938463463374607431768211507");  // ~2^128
    CHECK(encode_signed(0, n, kDefaults) == 0);
    CHECK(encode_signed(5, n, kDefaults) == 5);
    CHECK(encode_signed(-1, n, kDefaults) == n - 1);
    // |v| * 2 * max_leaf_terms >= modulus must be rejected.
    const mpz_class tiny = 1 << 20;
    CHECK_THROWS_AS(encode_signed(1 << 10, tiny, kDefaults), std::out_of_range);
}

TEST_CASE("decode_signed inverts encode_signed") {
    const mpz_class n("57896044618658097711785492504343953926634992332820282019728792003956564819949");
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10000; ++i) {
        const int64_t v = static_cast<int64_t>(rng()) >> 20;  // keep within the safe bound
        CHECK(decode_signed(encode_signed(v, n, kDefaults), n) == v);
    }
}

TEST_CASE("modular sums of encodings decode to integer sums") {
    // Brute-force oracle: plain big-integer addition.
    const mpz_class n = (mpz_class(1) << 128) + 51;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10000; ++i) {
        const int64_t a = static_cast<int64_t>(rng()) >> 24;
        const int64_t b = static_cast<int64_t>(rng()) >> 24;
        const mpz_class sum_residue = (encode_signed(a, n, kDefaults) +
                                       encode_signed(b, n, kDefaults)) % n;
        const mpz_class expected = mpz_class(std::to_string(a)) + mpz_class(std::to_string(b));
        CHECK(decode_signed(sum_residue, n) == expected);
    }
}

TEST_CASE("signed-sum homomorphy is exhaustive at a small modulus") {
    // Every pair in a +/-8 box under n = 2^16 + 1 with max_leaf_terms = 2.
    EncodingParams p = kDefaults;
    p.max_leaf_terms = 2;
    const mpz_class n = (mpz_class(1) << 16) + 1;
    for (int a = -8; a <= 8; ++a)
        for (int b = -8; b <= 8; ++b) {
            const mpz_class r = (encode_signed(a, n, p) + encode_signed(b, n, p)) % n;
            CHECK(decode_signed(r, n) == a + b);
        }
}

TEST_CASE("encoding params invariants are enforced") {
    EncodingParams p;
    p.feature_domain_bits = p.feature_scale_bits;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = EncodingParams{};
    p.max_leaf_terms = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
