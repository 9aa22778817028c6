#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>

namespace bqamd {

using cxd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// FNV-1a over raw bytes; used for instance digests and per-detector seed salts.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a_str(const std::string& s) { return fnv1a(s.data(), s.size()); }

} // namespace bqamd
