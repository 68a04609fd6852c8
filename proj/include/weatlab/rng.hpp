#pragma once

#include <cstdint>

namespace weatlab {

// Platform-independent generators. std::uniform_int_distribution is
// implementation-defined, so bounded draws are done by multiply-shift,
// which consumes exactly one 64-bit draw per bounded value.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** seeded via splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& s : state_) s = splitmix64(sm);
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) {
            return (x << k) | (x >> (64 - k));
        };
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, bound); bias is O(2^-64). Exactly one draw.
    std::uint64_t bounded(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_[4];
};

/// Generator state for worker range `index` under run seed `seed`.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed;
    std::uint64_t base = splitmix64(sm);
    return Rng(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

} // namespace weatlab
