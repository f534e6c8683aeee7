/// @file rng.hpp
/// @brief Counter-based random streams built on the splitmix64 mixer.
///
/// Every consumer derives an independent stream from (seed, stream id), so
/// samples evaluated in parallel see the same numbers as a serial sweep.

#ifndef TRACEINV_RNG_HPP
#define TRACEINV_RNG_HPP

#include <cstdint>
#include <vector>

namespace traceinv {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : base_(splitmix64(seed ^ (0x632BE59BD9B4E019ull * (stream + 1)))) {}

    std::uint64_t next_u64() { return splitmix64(base_ + counter_++); }

    /// Uniform in [0, 1) with 53 significant bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, m) via the 128-bit multiply reduction.
    int next_index(int m) {
        return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                                 static_cast<unsigned __int128>(m)) >> 64);
    }

    double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

/// First s entries of a seeded Fisher-Yates shuffle of {0, ..., n-1},
/// in draw order.
std::vector<int> sample_without_replacement(int n, int s, RngStream& rng);

}  // namespace traceinv

#endif
