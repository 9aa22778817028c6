#pragma once

#include "bqamd/constellation.hpp"
#include "bqamd/rng.hpp"
#include "bqamd/types.hpp"

#include <cstdint>
#include <vector>

namespace bqamd {

// One channel use: y = H x + n with n ~ CN(0, sigma2 * I) per receive antenna.
struct DetectionInstance {
    CMat H;                        // nr x nt, entries i.i.d. CN(0,1)
    std::vector<std::uint8_t> tx_bits; // nt*m bits, antenna i at [i*m, (i+1)*m), b0 first
    CVec x;                        // Gray image of tx_bits, unit average symbol energy
    CVec y;                        // received vector
    double sigma2 = 0.0;           // total noise variance per receive antenna
    double snr_db = 0.0;
    ModId mod = ModId::QAM16;

    std::uint64_t digest() const;
};

// Per-receive-antenna SNR convention with unit-energy symbols and E|h|^2 = 1:
// sigma2 = nt * 10^(-snr_db / 10).
double noise_variance(int nt, double snr_db);

// Draw order is fixed (tx bits, then H column-major, then noise) so instances
// are bit-reproducible from the stream state.
DetectionInstance generate_instance(int nt, int nr, ModId mod, double snr_db, RngStream& rng);

// Householder QR with explicit thin Q; R has a real nonnegative diagonal.
// Throws if a diagonal pivot falls below 1e-12 * ||A||_F.
void qr_decompose(const CMat& A, CMat& Q, CMat& R);

} // namespace bqamd
