#pragma once

#include <cstdint>
#include <limits>

namespace otolab {

// Counter-based generator: output i of stream `seed` is
// splitmix64(seed * GOLDEN + i). Streams with distinct seeds are
// independent for practical purposes, and a (seed, counter) pair fully
// identifies every draw, which keeps multi-run experiments reproducible
// and lets ports in other languages match the raw bit stream.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : base_(mix(seed * kGolden + kGolden)) {}

    result_type operator()() { return mix(base_ + (++counter_) * kGolden); }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    // Independent substream, e.g. one per (seed, agent) pair.
    Rng fork(std::uint64_t stream) const {
        Rng r;
        r.base_ = mix(base_ ^ mix(stream + 0x0DDB1A5E5BAD5EEDULL));
        return r;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is biased for huge n; all uses here have
        // n << 2^32 where the bias is negligible, but keep it exact anyway.
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace otolab
