#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace animat {

// Deterministic, splittable random streams.
//
// Every stream is identified by a 64-bit seed derived from a key tuple
// (e.g. master seed, generation, individual, purpose tag) via derive_seed.
// Streams derived from distinct keys are statistically independent, so
// parallel evaluations can draw from their own streams in any schedule
// without affecting results.
//
// The generator is SplitMix64; all distributions are implemented here so
// output sequences are identical across platforms and standard libraries.

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Hash a key tuple into a stream seed.
inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = base;
    uint64_t h = splitmix64(s);
    s ^= a * 0xD1B54A32D192ED03ull;
    h ^= splitmix64(s);
    s ^= b * 0x8CB92BA72F3D8DD7ull;
    h ^= splitmix64(s);
    s ^= c * 0xEB44ACCAB455D165ull;
    h ^= splitmix64(s);
    return h;
}

class RngStream {
public:
    RngStream() = default;
    explicit RngStream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased-enough integer in [0, n); n > 0.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    bool coin() { return (next_u64() >> 63) != 0; }

    /// Two independent standard normals (Box-Muller, both branches).
    std::pair<double, double> gaussian_pair() {
        // u1 in (0, 1] keeps the log finite.
        double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
    }

    double gaussian() { return gaussian_pair().first; }

    bool operator==(const RngStream&) const = default;

private:
    uint64_t state_ = 0;
};

} // namespace animat
