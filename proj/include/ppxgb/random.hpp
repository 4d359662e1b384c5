#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace ppxgb {

// Byte-level randomness source. Key generation and probabilistic encryption
// take one of these so experiments can swap the OS source for a seeded
// deterministic stream.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(void* buf, std::size_t len) = 0;

    uint64_t u64();
    uint32_t u32();
    // Uniform in [0, bound). bound must be nonzero.
    uint64_t u64_below(uint64_t bound);
};

// OS-backed CSPRNG. Thread-safe; this is the default for all key material.
class SystemRandom final : public RandomSource {
public:
    void fill(void* buf, std::size_t len) override;
};

RandomSource& system_random();

// Deterministic HMAC-SHA256 counter stream. Reproducible experiments only;
// not thread-safe, confine one instance to one thread.
class DrbgRandom final : public RandomSource {
public:
    explicit DrbgRandom(uint64_t seed);
    explicit DrbgRandom(std::span<const uint8_t> seed);
    void fill(void* buf, std::size_t len) override;

private:
    void refill();

    std::array<uint8_t, 32> key_{};
    uint64_t counter_ = 0;
    std::array<uint8_t, 32> block_{};
    std::size_t avail_ = 0;
};

}  // namespace ppxgb
