#pragma once

#include <utility>

#include "ppxgb/she.hpp"

namespace ppxgb {

// Private half of the scheme. Never reachable from the inference module.
struct ShePrivateKey {
    mpz_class n;
    mpz_class lambda;  // lcm(p-1, q-1)
    mpz_class mu;      // lambda^{-1} mod n
    unsigned modulus_bits = 0;

    bool operator==(const ShePrivateKey&) const = default;
};

// Security parameter k selects the modulus size: 80 -> 512-bit n (test
// mode), 128 -> 2048-bit n, 256 -> 3072-bit n.
std::pair<ShePublicKey, ShePrivateKey> she_keygen(unsigned k,
                                                  RandomSource& rng = system_random());

// Direct modulus-size variant used where the caller pins the size.
std::pair<ShePublicKey, ShePrivateKey> she_keygen_bits(unsigned modulus_bits,
                                                       RandomSource& rng = system_random());

mpz_class she_decrypt(const ShePrivateKey& sk, const SheCiphertext& c);

}  // namespace ppxgb
