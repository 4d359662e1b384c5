#pragma once

#include <gmpxx.h>

#include <span>
#include <vector>

#include "ppxgb/random.hpp"

namespace ppxgb {

// Public half of the additively homomorphic scheme (Paillier, g = n+1).
struct ShePublicKey {
    mpz_class n;
    unsigned modulus_bits = 0;

    mpz_class n_squared() const { return n * n; }

    bool operator==(const ShePublicKey&) const = default;
};

struct SheCiphertext {
    mpz_class value;

    bool operator==(const SheCiphertext&) const = default;
};

// Probabilistic encryption of m in [0, n): (1 + m*n) * r^n mod n^2.
SheCiphertext she_encrypt(const ShePublicKey& pk, const mpz_class& m,
                          RandomSource& rng = system_random());

// Ciphertext-space product; decrypts to the modular sum of the plaintexts.
// Empty input is rejected: callers encrypt a literal zero for empty sums.
SheCiphertext she_eval_add(const ShePublicKey& pk, std::span<const SheCiphertext> cs);

}  // namespace ppxgb
