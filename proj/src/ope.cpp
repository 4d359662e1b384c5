#include "ppxgb/ope.hpp"

#include <openssl/hmac.h>

#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "ppxgb/errors.hpp"

namespace ppxgb {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

void put_be64(uint8_t* out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(v >> (56 - 8 * i));
}

// PRF-expanded coin stream bound to one recursion interval. Blocks are
// HMAC-SHA256(key, descriptor || counter).
class CoinStream {
public:
    CoinStream(const OpeKey& key, u128 dlo, u128 dhi, u128 rlo, u128 rhi) : key_(key) {
        std::memcpy(desc_.data(), "ope|", 4);
        put_be64(desc_.data() + 4, static_cast<uint64_t>(dlo));
        desc_[12] = '|';
        put_be64(desc_.data() + 13, static_cast<uint64_t>(dhi));
        desc_[21] = '|';
        put_be64(desc_.data() + 22, static_cast<uint64_t>(rlo));
        desc_[30] = '|';
        put_be64(desc_.data() + 31, static_cast<uint64_t>(rhi));
    }

    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | next_byte();
        return v;
    }

    uint64_t u64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | next_byte();
        return v;
    }

    u128 u128v() {
        return static_cast<u128>(u64()) << 64 | u64();
    }

private:
    uint8_t next_byte() {
        if (avail_ == 0) refill();
        return block_[block_.size() - avail_--];
    }

    void refill() {
        std::array<uint8_t, 43> msg;
        std::memcpy(msg.data(), desc_.data(), desc_.size());
        msg[39] = static_cast<uint8_t>(block_index_ >> 24);
        msg[40] = static_cast<uint8_t>(block_index_ >> 16);
        msg[41] = static_cast<uint8_t>(block_index_ >> 8);
        msg[42] = static_cast<uint8_t>(block_index_);
        ++block_index_;
        unsigned int md_len = 0;
        HMAC(EVP_sha256(), key_.bytes.data(), static_cast<int>(key_.bytes.size()),
             msg.data(), msg.size(), block_.data(), &md_len);
        avail_ = block_.size();
    }

    const OpeKey& key_;
    std::array<uint8_t, 39> desc_;
    uint32_t block_index_ = 0;
    std::array<uint8_t, 32> block_{};
    std::size_t avail_ = 0;
};

uint64_t isqrt_u64(uint64_t v) {
    if (v == 0) return 0;
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Number of domain points assigned below the range cut. Approximates the
// hypergeometric draw by a normal with the same mean (Irwin-Hall sum of 12
// uniforms, integer arithmetic only, so tables reproduce bit-exactly across
// platforms). Clamped so both subintervals keep range >= domain.
u128 sample_domain_gap(CoinStream& coins, u128 ndomain, u128 rgap, u128 nrange) {
    const u128 mean = ndomain * rgap / nrange;
    const u128 var128 = mean * (nrange - rgap) / nrange;  // <= ndomain/4
    const uint64_t sigma = isqrt_u64(static_cast<uint64_t>(var128));

    u128 sum = 0;
    for (int i = 0; i < 12; ++i) sum += coins.u32();
    // E[sum] = 6*(2^32 - 1), sd ~= 2^32; z is a fixed-point N(0,1) sample.
    const i128 z_fp = static_cast<i128>(sum) - ((static_cast<i128>(6) << 32) - 6);
    i128 gap = static_cast<i128>(mean) + (z_fp * static_cast<i128>(sigma) >> 32);

    const i128 lo = nrange - rgap >= ndomain ? 0 : static_cast<i128>(ndomain - (nrange - rgap));
    const i128 hi = static_cast<i128>(ndomain < rgap ? ndomain : rgap);
    if (gap < lo) gap = lo;
    if (gap > hi) gap = hi;
    return static_cast<u128>(gap);
}

u128 uniform_below(CoinStream& coins, u128 width) {
    if ((width & (width - 1)) == 0) return coins.u128v() & (width - 1);
    const u128 top = ~static_cast<u128>(0);
    const u128 limit = top - top % width;  // multiple of width
    u128 v;
    do {
        v = coins.u128v();
    } while (v >= limit);
    return v % width;
}

struct Interval {
    u128 dlo, dhi, rlo, rhi;
};

// Descend one level toward plaintext m (encrypt) or ciphertext c (decrypt).
// go_low decides which half to keep given the domain and range cut points.
template <typename GoLow>
Interval descend(const OpeKey& key, Interval iv, GoLow go_low) {
    const u128 ndomain = iv.dhi - iv.dlo + 1;
    const u128 nrange = iv.rhi - iv.rlo + 1;
    const u128 rgap = nrange / 2;
    CoinStream coins(key, iv.dlo, iv.dhi, iv.rlo, iv.rhi);
    const u128 dgap = sample_domain_gap(coins, ndomain, rgap, nrange);
    if (go_low(iv.dlo + dgap, iv.rlo + rgap)) {
        if (dgap == 0) throw InvalidCiphertext("ope: ciphertext falls in an empty slot");
        return {iv.dlo, iv.dlo + dgap - 1, iv.rlo, iv.rlo + rgap - 1};
    }
    if (dgap == ndomain) throw InvalidCiphertext("ope: ciphertext falls in an empty slot");
    return {iv.dlo + dgap, iv.dhi, iv.rlo + rgap, iv.rhi};
}

uint64_t slot_value(const OpeKey& key, const Interval& iv) {
    CoinStream coins(key, iv.dlo, iv.dhi, iv.rlo, iv.rhi);
    const u128 width = iv.rhi - iv.rlo + 1;
    return static_cast<uint64_t>(iv.rlo + uniform_below(coins, width));
}

Interval full_interval(const OpeParams& p) {
    const u128 dtop = (static_cast<u128>(1) << p.domain_bits) - 1;
    const u128 rtop = p.range_bits == 64 ? ~static_cast<u128>(0) >> 64
                                         : (static_cast<u128>(1) << p.range_bits) - 1;
    return {0, dtop, 0, rtop};
}

}  // namespace

OpeKey ope_keygen(unsigned k, RandomSource& rng) {
    if (k != 128 && k != 256)
        throw std::invalid_argument("ope_keygen: security parameter must be 128 or 256");
    OpeKey key;
    key.bytes.resize(k / 8);
    rng.fill(key.bytes.data(), key.bytes.size());
    return key;
}

OpeCiphertext ope_encrypt(const OpeKey& key, const OpeParams& params, uint64_t m) {
    params.validate();
    if (key.bytes.empty()) throw std::invalid_argument("ope_encrypt: empty key");
    if (params.domain_bits < 64 && m >> params.domain_bits)
        throw std::out_of_range("ope_encrypt: plaintext outside " +
                                std::to_string(params.domain_bits) + "-bit domain");
    Interval iv = full_interval(params);
    while (iv.dlo < iv.dhi)
        iv = descend(key, iv, [m](u128 dcut, u128) { return static_cast<u128>(m) < dcut; });
    return OpeCiphertext{slot_value(key, iv)};
}

uint64_t ope_decrypt(const OpeKey& key, const OpeParams& params, OpeCiphertext c) {
    params.validate();
    if (key.bytes.empty()) throw std::invalid_argument("ope_decrypt: empty key");
    if (params.range_bits < 64 && c.value >> params.range_bits)
        throw InvalidCiphertext("ope_decrypt: ciphertext outside range");
    Interval iv = full_interval(params);
    while (iv.dlo < iv.dhi)
        iv = descend(key, iv, [c](u128, u128 rcut) { return static_cast<u128>(c.value) < rcut; });
    // Image membership: the slot draw must reproduce c exactly.
    if (slot_value(key, iv) != c.value)
        throw InvalidCiphertext("ope_decrypt: value not in the image of this key");
    return static_cast<uint64_t>(iv.dlo);
}

}  // namespace ppxgb
