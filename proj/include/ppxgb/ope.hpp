#pragma once

#include <cstdint>
#include <vector>

#include "ppxgb/ope_types.hpp"
#include "ppxgb/random.hpp"

namespace ppxgb {

// Symmetric key for the order-preserving scheme. All sampling coins are
// derived from it, so the whole encryption table is a pure function of
// (key, params): client and proxy can encrypt independently and agree.
struct OpeKey {
    std::vector<uint8_t> bytes;

    bool operator==(const OpeKey&) const = default;
};

OpeKey ope_keygen(unsigned k, RandomSource& rng = system_random());

// Deterministic, strictly order-preserving encryption of m < 2^domain_bits.
//
// Recursive binary range splitting: to embed the domain interval [dlo, dhi]
// into the range interval [rlo, rhi], the range is cut at its midpoint and
// the number of domain points falling below the cut is drawn from a
// binomial-shaped distribution with the hypergeometric mean, using coins
// from HMAC-SHA256 keyed by the OPE key over the interval descriptor
// "ope|dlo|dhi|rlo|rhi" (fixed-width big-endian fields). Recursion then
// descends into the half containing m. The binomial stand-in for the exact
// hypergeometric draw is a security approximation, not a correctness one:
// monotonicity and determinism are unconditional.
OpeCiphertext ope_encrypt(const OpeKey& key, const OpeParams& params, uint64_t m);

// Inverts ope_encrypt. Throws InvalidCiphertext when c does not lie on the
// key's monotone injection.
uint64_t ope_decrypt(const OpeKey& key, const OpeParams& params, OpeCiphertext c);

}  // namespace ppxgb
