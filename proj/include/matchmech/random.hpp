#pragma once

#include <cstdint>

namespace matchmech {

/// Seeded splitmix64 stream with multiply-shift bounded draws.
///
/// The recurrence and the bounded-draw reduction are fixed so that every
/// randomized mechanism produces the same output for the same seed on any
/// platform. A source is single-owner; parallel work derives fresh sources
/// with derive_seed().
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, n): the high word of next_u64() * n.
    /// Throws std::domain_error when n == 0.
    std::uint64_t below(std::uint64_t n);

    std::uint64_t state() const noexcept { return state_; }

    /// Resume a stream from a value previously returned by state().
    static RandomSource from_state(std::uint64_t state) noexcept { return RandomSource(state); }

    friend bool operator==(const RandomSource&, const RandomSource&) = default;

private:
    std::uint64_t state_;
};

inline std::uint64_t next_u64(RandomSource& src) noexcept { return src.next_u64(); }
inline std::uint64_t rand_below(RandomSource& src, std::uint64_t n) { return src.below(n); }

/// Seed for unit (config, trial) of a run started from `base`.
///
/// Chains three splitmix64 draws: the base stream's first output is xor-ed
/// with the config index and reseeded, that stream's first output is xor-ed
/// with the trial index and reseeded, and the result is its first output.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t config, std::uint64_t trial) noexcept;

}  // namespace matchmech
