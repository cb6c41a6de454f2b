#pragma once

#include <bit>
#include <cstdint>

#include "qwb/errors.hpp"

namespace qwb {

// Deterministic random source: splitmix64 behind a bit buffer.
// Independent streams are derived from (master seed, stream index) by a fixed
// mixing function, so a run is reproducible for a given seed regardless of
// how draws are scheduled across workers. The algorithm is frozen; changing
// it would change every sampled artifact.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : s_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Counter-based stream derivation: stream i of a master seed.
    static RandomSource stream(std::uint64_t master, std::uint64_t index) {
        std::uint64_t h = mix(master + 0x9e3779b97f4a7c15ULL * (index + 1));
        return RandomSource(mix(h ^ 0x632be59bd9b4e019ULL));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        return mix(z);
    }

    bool bit() {
        if (nbits_ == 0) {
            buf_ = next_u64();
            nbits_ = 64;
        }
        bool b = buf_ & 1;
        buf_ >>= 1;
        --nbits_;
        return b;
    }

    std::uint64_t bits(int k) {
        std::uint64_t v = 0;
        for (int i = 0; i < k; ++i) v = (v << 1) | (bit() ? 1u : 0u);
        return v;
    }

    // Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw Error("RandomSource::below: empty range");
        if (n == 1) return 0;
        int k = 64 - std::countl_zero(n - 1);
        for (;;) {
            std::uint64_t v = bits(k);
            if (v < n) return v;
        }
    }

    // Uniform label increment in {-1, 0, +1}.
    int label_step() {
        for (;;) {
            std::uint64_t v = bits(2);
            if (v < 3) return static_cast<int>(v) - 1;
        }
    }

    // P(k) = 2^{-k-1}, k >= 0: offspring law of the critical geometric
    // Galton-Watson tree used throughout.
    int geometric_half() {
        int k = 0;
        while (bit()) ++k;
        return k;
    }

private:
    std::uint64_t s_;
    std::uint64_t buf_ = 0;
    int nbits_ = 0;
};

} // namespace qwb
