#include "ppxgb/she_private.hpp"

#include <stdexcept>

#include "ppxgb/bigint.hpp"
#include "ppxgb/errors.hpp"

namespace ppxgb {

namespace {

mpz_class random_prime(unsigned bits, RandomSource& rng) {
    if (bits < 16) throw std::invalid_argument("she: modulus too small");
    for (;;) {
        mpz_class p = rand_mpz_bits(rng, bits);
        // Top two bits set so the product of two such primes has full width.
        mpz_setbit(p.get_mpz_t(), bits - 2);
        mpz_setbit(p.get_mpz_t(), 0);
        if (mpz_probab_prime_p(p.get_mpz_t(), 30) > 0) return p;
    }
}

}  // namespace

std::pair<ShePublicKey, ShePrivateKey> she_keygen(unsigned k, RandomSource& rng) {
    unsigned bits;
    switch (k) {
        case 80: bits = 512; break;
        case 128: bits = 2048; break;
        case 256: bits = 3072; break;
        default:
            throw std::invalid_argument("she_keygen: security parameter must be 80, 128 or 256");
    }
    return she_keygen_bits(bits, rng);
}

std::pair<ShePublicKey, ShePrivateKey> she_keygen_bits(unsigned modulus_bits, RandomSource& rng) {
    if (modulus_bits < 128 || modulus_bits % 2 != 0)
        throw std::invalid_argument("she_keygen: modulus_bits must be even and at least 128");
    const unsigned half = modulus_bits / 2;
    for (;;) {
        mpz_class p = random_prime(half, rng);
        mpz_class q = random_prime(half, rng);
        if (p == q) continue;
        mpz_class n = p * q;
        if (mpz_sizeinbase(n.get_mpz_t(), 2) != modulus_bits) continue;
        mpz_class lambda;
        mpz_lcm(lambda.get_mpz_t(), mpz_class(p - 1).get_mpz_t(), mpz_class(q - 1).get_mpz_t());
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), lambda.get_mpz_t());
        if (g != 1) continue;
        mpz_class mu;
        if (mpz_invert(mu.get_mpz_t(), lambda.get_mpz_t(), n.get_mpz_t()) == 0) continue;

        ShePublicKey pk{n, modulus_bits};
        ShePrivateKey sk{n, lambda, mu, modulus_bits};
        // Probe round-trip before releasing the pair.
        const mpz_class probe = 0x5bd1e995;
        if (she_decrypt(sk, she_encrypt(pk, probe, rng)) != probe) continue;
        return {pk, sk};
    }
}

SheCiphertext she_encrypt(const ShePublicKey& pk, const mpz_class& m, RandomSource& rng) {
    if (pk.n <= 0) throw std::invalid_argument("she_encrypt: invalid public key");
    if (m < 0 || m >= pk.n)
        throw std::out_of_range("she_encrypt: plaintext outside [0, n)");
    const mpz_class n2 = pk.n_squared();
    mpz_class r, g;
    do {
        r = rand_mpz_below(rng, pk.n);
        if (r == 0) continue;
        mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t());
    } while (r == 0 || g != 1);
    mpz_class rn;
    mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t(), n2.get_mpz_t());
    mpz_class c = (1 + m * pk.n) % n2;
    c = c * rn % n2;
    return SheCiphertext{c};
}

mpz_class she_decrypt(const ShePrivateKey& sk, const SheCiphertext& c) {
    if (sk.n <= 0) throw std::invalid_argument("she_decrypt: invalid private key");
    const mpz_class n2 = sk.n * sk.n;
    if (c.value <= 0 || c.value >= n2)
        throw InvalidCiphertext("she_decrypt: ciphertext outside (0, n^2)");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), sk.n.get_mpz_t());
    if (g != 1) throw InvalidCiphertext("she_decrypt: ciphertext not coprime to modulus");
    mpz_class u;
    mpz_powm(u.get_mpz_t(), c.value.get_mpz_t(), sk.lambda.get_mpz_t(), n2.get_mpz_t());
    u -= 1;
    if (u % sk.n != 0) throw InvalidCiphertext("she_decrypt: malformed ciphertext");
    mpz_class l = u / sk.n;
    return l * sk.mu % sk.n;
}

SheCiphertext she_eval_add(const ShePublicKey& pk, std::span<const SheCiphertext> cs) {
    if (cs.empty())
        throw std::invalid_argument("she_eval_add: empty ciphertext list");
    const mpz_class n2 = pk.n_squared();
    mpz_class acc = 1;
    for (const auto& c : cs) {
        if (c.value <= 0 || c.value >= n2)
            throw InvalidCiphertext("she_eval_add: ciphertext outside (0, n^2)");
        acc = acc * c.value % n2;
    }
    return SheCiphertext{acc};
}

}  // namespace ppxgb
