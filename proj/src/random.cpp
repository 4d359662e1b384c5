#include "ppxgb/random.hpp"

#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <cstring>
#include <stdexcept>

namespace ppxgb {

uint64_t RandomSource::u64() {
    uint64_t v;
    fill(&v, sizeof v);
    return v;
}

uint32_t RandomSource::u32() {
    uint32_t v;
    fill(&v, sizeof v);
    return v;
}

uint64_t RandomSource::u64_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("u64_below: zero bound");
    if ((bound & (bound - 1)) == 0) return u64() & (bound - 1);
    // Rejection sampling keeps the draw unbiased.
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    uint64_t v;
    do {
        v = u64();
    } while (v >= limit);
    return v % bound;
}

void SystemRandom::fill(void* buf, std::size_t len) {
    if (len == 0) return;
    if (RAND_bytes(static_cast<unsigned char*>(buf), static_cast<int>(len)) != 1)
        throw std::runtime_error("system randomness source failed");
}

RandomSource& system_random() {
    static SystemRandom instance;
    return instance;
}

DrbgRandom::DrbgRandom(uint64_t seed) {
    uint8_t bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
    unsigned int md_len = 0;
    HMAC(EVP_sha256(), "ppxgb-drbg-seed", 15, bytes, sizeof bytes, key_.data(), &md_len);
}

DrbgRandom::DrbgRandom(std::span<const uint8_t> seed) {
    unsigned int md_len = 0;
    HMAC(EVP_sha256(), "ppxgb-drbg-seed", 15, seed.data(), seed.size(), key_.data(), &md_len);
}

void DrbgRandom::refill() {
    uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<uint8_t>(counter_ >> (56 - 8 * i));
    ++counter_;
    unsigned int md_len = 0;
    HMAC(EVP_sha256(), key_.data(), static_cast<int>(key_.size()), ctr, sizeof ctr,
         block_.data(), &md_len);
    avail_ = block_.size();
}

void DrbgRandom::fill(void* buf, std::size_t len) {
    auto* out = static_cast<uint8_t*>(buf);
    while (len > 0) {
        if (avail_ == 0) refill();
        const std::size_t take = len < avail_ ? len : avail_;
        std::memcpy(out, block_.data() + (block_.size() - avail_), take);
        avail_ -= take;
        out += take;
        len -= take;
    }
}

}  // namespace ppxgb
