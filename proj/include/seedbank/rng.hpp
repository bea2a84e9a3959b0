#pragma once

#include <cstdint>

namespace seedbank {

// xoshiro256++ with splitmix64 seeding. Replicate-level parallelism derives one
// stream per (master seed, stream index) pair, so results are reproducible for a
// fixed seed regardless of how replicates are distributed over workers.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0) noexcept {
        std::uint64_t z = mix64(master_seed ^ (0xA24BAED4963EE407ULL * (stream_index + 1)));
        for (auto& word : state_) {
            z += 0x9E3779B97F4A7C15ULL;
            word = mix64(z);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53-bit resolution.
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe for inverse-power transforms.
    double next_unit_open() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Unbiased integer in [0, bound). bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift rejection method.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) noexcept { return next_unit() < p; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    // 64-bit finalizer (murmur3 constants).
    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z ^= z >> 33;
        z *= 0xFF51AFD7ED558CCDULL;
        z ^= z >> 33;
        z *= 0xC4CEB9FE1A85EC53ULL;
        z ^= z >> 33;
        return z;
    }

    std::uint64_t state_[4];
};

inline RngStream replicate_stream(std::uint64_t master_seed, std::uint64_t replicate) noexcept {
    return RngStream(master_seed, replicate);
}

} // namespace seedbank
