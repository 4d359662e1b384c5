#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "ppxgb/bigint.hpp"
#include "ppxgb/encoding.hpp"
#include "ppxgb/errors.hpp"
#include "ppxgb/ope.hpp"
#include "ppxgb/prf.hpp"
#include "ppxgb/she_private.hpp"

using namespace ppxgb;

// ---------------------------------------------------------------- PRF

TEST_CASE("prf_keygen length contract and independence") {
    CHECK(prf_keygen(128).bytes.size() == 16);
    CHECK(prf_keygen(256).bytes.size() == 32);
    CHECK_THROWS_AS(prf_keygen(100), std::invalid_argument);
    CHECK(prf_keygen(128).bytes != prf_keygen(128).bytes);
}

TEST_CASE("prf keys pass a monobit frequency check") {
    uint64_t ones = 0;
    const int keys = 10000;
    for (int i = 0; i < keys; ++i)
        for (uint8_t b : prf_keygen(128).bytes) ones += std::popcount(b);
    const double n = keys * 128.0;
    const double sigma = std::sqrt(n) / 2.0;
    CHECK(std::fabs(static_cast<double>(ones) - n / 2.0) < 6.0 * sigma);
}

TEST_CASE("pseudonym determinism, shape and input validation") {
    const PrfKey key = prf_keygen(128);
    const std::string p1 = pseudonym(key, "age");
    CHECK(p1 == pseudonym(key, "age"));
    CHECK(p1.size() == 32);
    for (char c : p1) CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
    CHECK_THROWS_AS(pseudonym(key, ""), std::invalid_argument);
}

TEST_CASE("pseudonyms collide for neither names nor keys") {
    const PrfKey key = prf_keygen(128);
    std::set<std::string> seen;
    for (int i = 0; i < 10000; ++i)
        CHECK(seen.insert(pseudonym(key, "feature-" + std::to_string(i))).second);

    for (int i = 0; i < 1000; ++i) {
        const PrfKey a = prf_keygen(128);
        const PrfKey b = prf_keygen(128);
        CHECK(pseudonym(a, "name") != pseudonym(b, "name"));
    }
}

// ---------------------------------------------------------------- OPE

TEST_CASE("ope_keygen contract") {
    CHECK(ope_keygen(128).bytes.size() == 16);
    CHECK(ope_keygen(256).bytes.size() == 32);
    CHECK_THROWS_AS(ope_keygen(64), std::invalid_argument);
}

TEST_CASE("ope exhaustive monotonicity on a 12-bit domain") {
    const OpeKey key = ope_keygen(128);
    const OpeParams params{12, 20};
    uint64_t prev = 0;
    for (uint64_t m = 0; m < (uint64_t(1) << 12); ++m) {
        const uint64_t c = ope_encrypt(key, params, m).value;
        if (m > 0) CHECK(prev < c);
        CHECK(c < (uint64_t(1) << 20));
        prev = c;
    }
}

TEST_CASE("ope boundary round-trips and determinism") {
    const OpeKey key = ope_keygen(128);
    const OpeParams params{40, 64};
    const uint64_t top = (uint64_t(1) << 40) - 1;
    CHECK(ope_decrypt(key, params, ope_encrypt(key, params, 0)) == 0);
    CHECK(ope_decrypt(key, params, ope_encrypt(key, params, top)) == top);
    const uint64_t m = 0x123456789aULL;
    CHECK(ope_encrypt(key, params, m) == ope_encrypt(key, params, m));
    CHECK_THROWS_AS(ope_encrypt(key, params, top + 1), std::out_of_range);
}

TEST_CASE("ope round-trips on random 40-bit plaintexts") {
    const OpeKey key = ope_keygen(128);
    const OpeParams params{40, 64};
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const uint64_t m = rng() & ((uint64_t(1) << 40) - 1);
        CHECK(ope_decrypt(key, params, ope_encrypt(key, params, m)) == m);
    }
}

TEST_CASE("ope decrypt rejects off-image values") {
    const OpeKey key = ope_keygen(128);
    const OpeParams params{12, 20};
    // Count image points among a window; any non-image point must be rejected.
    std::set<uint64_t> image;
    for (uint64_t m = 0; m < (uint64_t(1) << 12); ++m)
        image.insert(ope_encrypt(key, params, m).value);
    int rejected = 0, probed = 0;
    for (uint64_t c = 0; c < 4096 && probed < 64; ++c) {
        if (image.count(c)) continue;
        ++probed;
        try {
            ope_decrypt(key, params, OpeCiphertext{c});
        } catch (const InvalidCiphertext&) {
            ++rejected;
        }
    }
    CHECK(probed == rejected);
    CHECK_THROWS_AS(ope_decrypt(key, params, OpeCiphertext{uint64_t(1) << 21}),
                    InvalidCiphertext);
}

TEST_CASE("ope decrypt is monotone over the 12-bit image") {
    const OpeKey key = ope_keygen(128);
    const OpeParams params{12, 20};
    std::vector<uint64_t> image;
    for (uint64_t m = 0; m < (uint64_t(1) << 12); ++m)
        image.push_back(ope_encrypt(key, params, m).value);
    for (std::size_t i = 1; i < image.size(); ++i)
        CHECK(ope_decrypt(key, params, OpeCiphertext{image[i - 1]}) <
              ope_decrypt(key, params, OpeCiphertext{image[i]}));
}

TEST_CASE("distinct ope keys give distinct tables, same key gives the same") {
    const OpeParams params{8, 16};
    for (int trial = 0; trial < 10; ++trial) {
        const OpeKey a = ope_keygen(128);
        const OpeKey b = ope_keygen(128);
        std::vector<uint64_t> ta, tb, ta2;
        for (uint64_t m = 0; m < 256; ++m) {
            ta.push_back(ope_encrypt(a, params, m).value);
            tb.push_back(ope_encrypt(b, params, m).value);
            ta2.push_back(ope_encrypt(a, params, m).value);
        }
        CHECK(ta != tb);
        CHECK(ta == ta2);
    }
}

TEST_CASE("ope key privacy smoke: fixed plaintext varies across keys") {
    const OpeParams params{40, 64};
    std::set<uint64_t> cts;
    for (int i = 0; i < 32; ++i)
        cts.insert(ope_encrypt(ope_keygen(128), params, 123456).value);
    CHECK(cts.size() == 32);
}

// ---------------------------------------------------------------- SHE

TEST_CASE("she keygen probe and zero round-trip") {
    DrbgRandom rng(101);
    auto [pk, sk] = she_keygen_bits(512, rng);
    CHECK(pk.n == sk.n);
    CHECK(mpz_sizeinbase(pk.n.get_mpz_t(), 2) == 512);
    CHECK(she_decrypt(sk, she_encrypt(pk, 0, rng)) == 0);
    CHECK_THROWS_AS(she_keygen(99), std::invalid_argument);
}

TEST_CASE("she k-to-modulus mapping") {
    DrbgRandom rng(102);
    auto [pk, sk] = she_keygen(80, rng);
    CHECK(pk.modulus_bits == 512);
    CHECK(mpz_sizeinbase(pk.n.get_mpz_t(), 2) == 512);
}

TEST_CASE("two keygens produce distinct moduli") {
    auto [pk1, sk1] = she_keygen_bits(512);
    auto [pk2, sk2] = she_keygen_bits(512);
    CHECK(pk1.n != pk2.n);
}

TEST_CASE("she round-trips 100 random plaintexts at the test modulus") {
    DrbgRandom rng(103);
    auto [pk, sk] = she_keygen_bits(512, rng);
    for (int i = 0; i < 100; ++i) {
        const mpz_class m = rand_mpz_below(rng, pk.n);
        const SheCiphertext c = she_encrypt(pk, m, rng);
        CHECK(c.value < pk.n_squared());
        CHECK(she_decrypt(sk, c) == m);
    }
    CHECK_THROWS_AS(she_encrypt(pk, pk.n, rng), std::out_of_range);
    CHECK_THROWS_AS(she_encrypt(pk, mpz_class(-1), rng), std::out_of_range);
}

TEST_CASE("she encryption is probabilistic") {
    DrbgRandom rng(104);
    auto [pk, sk] = she_keygen_bits(512, rng);
    const mpz_class m = 424242;
    std::set<std::string> seen;
    for (int i = 0; i < 1000; ++i)
        CHECK(seen.insert(she_encrypt(pk, m, rng).value.get_str(16)).second);
}

TEST_CASE("she rejects malformed ciphertexts") {
    DrbgRandom rng(105);
    auto [pk, sk] = she_keygen_bits(512, rng);
    CHECK_THROWS_AS(she_decrypt(sk, SheCiphertext{pk.n_squared()}), InvalidCiphertext);
    CHECK_THROWS_AS(she_decrypt(sk, SheCiphertext{mpz_class(0)}), InvalidCiphertext);
    CHECK_THROWS_AS(she_decrypt(sk, SheCiphertext{pk.n}), InvalidCiphertext);
    CHECK_THROWS_AS(she_eval_add(pk, {}), std::invalid_argument);
}

TEST_CASE("she homomorphic sums match the big-integer adder oracle") {
    DrbgRandom rng(106);
    auto [pk, sk] = she_keygen_bits(512, rng);

    // Additive identity.
    std::vector<SheCiphertext> zeros{she_encrypt(pk, 0, rng), she_encrypt(pk, 0, rng)};
    CHECK(she_decrypt(sk, she_eval_add(pk, zeros)) == 0);

    // 500 random residues against plain modular addition.
    std::vector<SheCiphertext> cts;
    mpz_class expected = 0;
    for (int i = 0; i < 500; ++i) {
        const mpz_class m = rand_mpz_below(rng, pk.n);
        expected = (expected + m) % pk.n;
        cts.push_back(she_encrypt(pk, m, rng));
    }
    CHECK(she_decrypt(sk, she_eval_add(pk, cts)) == expected);
}

TEST_CASE("she signed chain: -3 + 5 decodes to 2") {
    DrbgRandom rng(107);
    auto [pk, sk] = she_keygen_bits(512, rng);
    const EncodingParams enc;
    std::vector<SheCiphertext> cts{she_encrypt(pk, encode_signed(-3, pk.n, enc), rng),
                                   she_encrypt(pk, encode_signed(5, pk.n, enc), rng)};
    const mpz_class residue = she_decrypt(sk, she_eval_add(pk, cts));
    CHECK(decode_signed(residue, pk.n) == 2);
}
