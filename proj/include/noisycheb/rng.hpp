#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace noisycheb {

/// SplitMix64 finalizer; the integer hash used everywhere seeds or
/// substreams are derived.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

/// Derived seed for trial `index` of a harness run. Documented contract:
/// substream_seed = mix64(base_seed ^ mix64(index ^ 0xD1B54A32D192ED03)).
inline std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t index) {
    return mix64(base_seed ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

/// Counter-based generator: output k is mix64(seed + k * gamma), the
/// SplitMix64 stream. Identical seeds give identical streams within a build.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform on the open interval (0, 1).
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (cosine branch); two uniforms per draw.
    double next_gaussian() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace noisycheb
