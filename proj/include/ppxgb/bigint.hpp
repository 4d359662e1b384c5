#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "ppxgb/random.hpp"

namespace ppxgb {

std::string to_hex(const mpz_class& v);
mpz_class mpz_from_hex(const std::string& hex);

std::string bytes_to_hex(const uint8_t* data, std::size_t len);
std::string bytes_to_hex(const std::vector<uint8_t>& data);
std::vector<uint8_t> hex_to_bytes(const std::string& hex);

// Uniform integer with exactly `bits` bits (top bit set).
mpz_class rand_mpz_bits(RandomSource& rng, unsigned bits);

// Uniform in [0, bound).
mpz_class rand_mpz_below(RandomSource& rng, const mpz_class& bound);

}  // namespace ppxgb
