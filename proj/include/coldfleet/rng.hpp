#ifndef COLDFLEET_RNG_HPP
#define COLDFLEET_RNG_HPP

#include <cstdint>

namespace coldfleet {

// SplitMix64 (Steele, Lea & Flood; public-domain reference constants).
// Chosen because its output is a pure function of a 64-bit state, which makes
// per-iteration substreams and cross-platform bit-stable results trivial.
// The stdlib distributions are deliberately avoided: their output is not
// specified bit-for-bit across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }

private:
    std::uint64_t state_;
};

// Avalanche mix used to derive substream states (the SplitMix64 finalizer).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based substream: stream `index` of a run seeded with `seed`.
// Multiplication by an odd constant is a bijection on 64-bit counters, so
// distinct indices always produce distinct initial states for a fixed seed.
// Iterations can therefore be generated in any order, on any number of
// threads, with identical results.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(seed ^ (0x9E3779B97F4A7C15ull * (index + 1))));
}

}  // namespace coldfleet

#endif  // COLDFLEET_RNG_HPP
