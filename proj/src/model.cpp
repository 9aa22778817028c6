#include "bqamd/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bqamd {

std::uint64_t DetectionInstance::digest() const {
    std::uint64_t h = fnv1a(H.data(), sizeof(cxd) * H.size());
    h = fnv1a(y.data(), sizeof(cxd) * y.size(), h);
    h = fnv1a(tx_bits.data(), tx_bits.size(), h);
    h = fnv1a(&sigma2, sizeof(sigma2), h);
    return h;
}

double noise_variance(int nt, double snr_db) {
    return static_cast<double>(nt) * std::pow(10.0, -snr_db / 10.0);
}

DetectionInstance generate_instance(int nt, int nr, ModId mod, double snr_db, RngStream& rng) {
    if (nt < 1 || nr < 1) throw std::invalid_argument("generate_instance: dimensions must be positive");
    const int m = bits_per_symbol(mod);

    DetectionInstance inst;
    inst.mod = mod;
    inst.snr_db = snr_db;
    inst.sigma2 = noise_variance(nt, snr_db);

    // Transmit bits, packed from 64-bit words LSB-first.
    const int nbits = nt * m;
    inst.tx_bits.resize(nbits);
    std::uint64_t word = 0;
    for (int i = 0; i < nbits; ++i) {
        if (i % 64 == 0) word = rng.next_u64();
        inst.tx_bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }

    inst.x = CVec(nt);
    for (int i = 0; i < nt; ++i) {
        std::uint32_t label = 0;
        for (int j = 0; j < m; ++j) label |= static_cast<std::uint32_t>(inst.tx_bits[i * m + j]) << j;
        inst.x(i) = map_label(label, mod);
    }

    inst.H = CMat(nr, nt);
    for (int j = 0; j < nt; ++j)
        for (int i = 0; i < nr; ++i) inst.H(i, j) = rng.next_cnormal();

    const double nstd = std::sqrt(inst.sigma2);
    CVec n(nr);
    for (int i = 0; i < nr; ++i) n(i) = nstd * rng.next_cnormal();
    inst.y = inst.H * inst.x + n;
    return inst;
}

void qr_decompose(const CMat& A, CMat& Q, CMat& R) {
    const Eigen::Index nr = A.rows(), nt = A.cols();
    if (nr < nt) throw std::invalid_argument("qr_decompose: more columns than rows");

    Eigen::HouseholderQR<CMat> qr(A);
    Q = qr.householderQ() * CMat::Identity(nr, nt);
    R = qr.matrixQR().topRows(nt).triangularView<Eigen::Upper>();

    const double tol = 1e-12 * A.norm();
    for (Eigen::Index i = 0; i < nt; ++i) {
        const double mag = std::abs(R(i, i));
        if (mag <= tol) throw std::runtime_error("qr_decompose: rank-deficient matrix");
        // Rotate so the diagonal is real and nonnegative.
        const cxd phase = R(i, i) / mag;
        R.row(i) *= std::conj(phase);
        Q.col(i) *= phase;
        R(i, i) = mag;
    }
}

} // namespace bqamd
