#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace bqamd {

// Deterministic 64-bit-state generator (splitmix64). Substreams are derived by
// avalanche-mixing (master_seed, snr_index, trial_index), so instances for any
// (snr, trial) pair are reproducible independently of scheduling order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : state_(seed) {}

    static std::uint64_t avalanche(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    static RngStream substream(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b) {
        std::uint64_t s = avalanche(master_seed + 0x9e3779b97f4a7c15ull);
        s = avalanche(s ^ (a + 0xbf58476d1ce4e5b9ull));
        s = avalanche(s ^ (b + 0x94d049bb133111ebull));
        return RngStream(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return avalanche(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_double_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Circularly symmetric complex Gaussian with E|z|^2 = 1 (Box-Muller).
    std::complex<double> next_cnormal() {
        const double r = std::sqrt(-std::log(next_double_pos()));
        const double theta = 2.0 * M_PI * next_double();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

private:
    std::uint64_t state_;
};

} // namespace bqamd
