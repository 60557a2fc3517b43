// Deterministic pseudo-random streams.
//
// Every source of randomness in the library is an RngStream seeded from a
// 64-bit seed plus a purpose tag and an index. Distinct (seed, purpose, index)
// triples yield decorrelated streams; the same triple replays the identical
// sequence. This is what makes whole simulations, coupled runs, and CSV
// outputs byte-reproducible.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace aoi {

// Output finalizer of splitmix64 (Steele, Lea, Flood; public domain reference
// implementation). Also used as the mixing function for seed derivation.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Combines a base seed with one extra word into a new well-mixed seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
    return mix64(base + 0x9e3779b97f4a7c15ULL * (a + 1));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                           std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

// Role of a stream within a simulation. The numeric values are part of the
// reproducibility contract: changing them changes every sampled trajectory.
enum class StreamPurpose : std::uint64_t {
    generation = 1,     // inter-generation times
    arrival_delay = 2,  // per-packet a_i - s_i delays
    service = 3,        // per-server service draws
    epoch = 4,          // coupled-run completion epochs
    rank = 5,           // coupled-run rank selection
    scratch = 6,        // tests and oracles
};

// splitmix64 generator. Small, fast, and every draw advances the state by a
// fixed increment, so the draw counter alone identifies the stream position.
class RngStream {
  public:
    RngStream() : RngStream(0, StreamPurpose::scratch, 0) {}

    RngStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index)
        : state_(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(purpose)), index)) {}

    std::uint64_t next_u64() {
        ++draws_;
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on the open interval (0, 1); safe as a log() argument.
    double next_open01() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Uniform on {0, 1, ..., n-1} via the multiply-shift bound technique.
    // Bias is below 2^-64 per draw, invisible at our sample sizes.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller. Always consumes exactly two uniforms
    // and returns one variate, keeping stream consumption predictable.
    double next_normal() {
        const double u1 = next_open01();
        const double u2 = next_open01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    std::uint64_t draws() const { return draws_; }

  private:
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

// Bit pattern of a double, for folding real-valued sweep coordinates into
// seed derivation without rounding ambiguity.
inline std::uint64_t double_bits(double x) {
    return std::bit_cast<std::uint64_t>(x);
}

}  // namespace aoi
