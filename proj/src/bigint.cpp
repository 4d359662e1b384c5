#include "ppxgb/bigint.hpp"

#include <stdexcept>
#include <vector>

namespace ppxgb {

std::string to_hex(const mpz_class& v) {
    if (v < 0) throw std::invalid_argument("to_hex: negative value");
    char* raw = mpz_get_str(nullptr, 16, v.get_mpz_t());
    std::string s(raw);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(raw, s.size() + 1);
    return s;
}

mpz_class mpz_from_hex(const std::string& hex) {
    mpz_class v;
    if (hex.empty() || mpz_set_str(v.get_mpz_t(), hex.c_str(), 16) != 0 || v < 0)
        throw std::invalid_argument("mpz_from_hex: malformed hex integer");
    return v;
}

static constexpr char kHexDigits[] = "0123456789abcdef";

std::string bytes_to_hex(const uint8_t* data, std::size_t len) {
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(kHexDigits[data[i] >> 4]);
        out.push_back(kHexDigits[data[i] & 0xf]);
    }
    return out;
}

std::string bytes_to_hex(const std::vector<uint8_t>& data) {
    return bytes_to_hex(data.data(), data.size());
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::vector<uint8_t> hex_to_bytes(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex_to_bytes: odd length");
    std::vector<uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_nibble(hex[2 * i]);
        const int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("hex_to_bytes: non-hex character");
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

mpz_class rand_mpz_bits(RandomSource& rng, unsigned bits) {
    if (bits == 0) throw std::invalid_argument("rand_mpz_bits: zero width");
    const std::size_t nbytes = (bits + 7) / 8;
    std::vector<uint8_t> buf(nbytes);
    rng.fill(buf.data(), buf.size());
    mpz_class v;
    mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
    // Trim to width, then force the top bit so the result has exactly `bits` bits.
    mpz_class mask = (mpz_class(1) << bits) - 1;
    v &= mask;
    mpz_setbit(v.get_mpz_t(), bits - 1);
    return v;
}

mpz_class rand_mpz_below(RandomSource& rng, const mpz_class& bound) {
    if (bound <= 0) throw std::invalid_argument("rand_mpz_below: nonpositive bound");
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t nbytes = (bits + 7) / 8;
    std::vector<uint8_t> buf(nbytes);
    const unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
    for (;;) {
        rng.fill(buf.data(), buf.size());
        buf[0] &= static_cast<uint8_t>(0xff >> excess);
        mpz_class v;
        mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
        if (v < bound) return v;
    }
}

}  // namespace ppxgb
