#include "bqamd/constellation.hpp"

#include <algorithm>
#include <cmath>

namespace bqamd {

ModId mod_from_name(const std::string& name) {
    if (name == "QPSK" || name == "qpsk") return ModId::QPSK;
    if (name == "QAM16" || name == "16QAM" || name == "qam16") return ModId::QAM16;
    throw std::invalid_argument("unsupported modulation: " + name);
}

namespace {

std::vector<cxd> build_table(ModId mod) {
    const int m = bits_per_symbol(mod);
    const int M = 1 << m;
    std::vector<cxd> table(M);
    for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(M); ++label) {
        const auto s = [&](int r) { return 1.0 - 2.0 * ((label >> r) & 1u); };
        if (mod == ModId::QPSK) {
            table[label] = cxd(s(0), s(1)) * std::sqrt(0.5);
        } else {
            table[label] = cxd(s(0) * (2.0 - s(2)), s(1) * (2.0 - s(3))) * std::sqrt(0.1);
        }
    }
    return table;
}

std::vector<std::uint32_t> build_lex_order(ModId mod) {
    const int m = bits_per_symbol(mod);
    std::vector<std::uint32_t> order(1u << m);
    for (std::uint32_t rank = 0; rank < order.size(); ++rank) order[rank] = bit_reverse(rank, m);
    return order;
}

} // namespace

const std::vector<cxd>& constellation(ModId mod) {
    static const std::vector<cxd> qpsk = build_table(ModId::QPSK);
    static const std::vector<cxd> qam16 = build_table(ModId::QAM16);
    return mod == ModId::QPSK ? qpsk : qam16;
}

const std::vector<std::uint32_t>& lex_ordered_labels(ModId mod) {
    static const std::vector<std::uint32_t> qpsk = build_lex_order(ModId::QPSK);
    static const std::vector<std::uint32_t> qam16 = build_lex_order(ModId::QAM16);
    return mod == ModId::QPSK ? qpsk : qam16;
}

cxd map_label(std::uint32_t label, ModId mod) {
    const auto& table = constellation(mod);
    if (label >= table.size()) throw std::invalid_argument("map_label: label out of range");
    return table[label];
}

cxd map_bits(std::span<const std::uint8_t> bits, ModId mod) {
    const int m = bits_per_symbol(mod);
    if (static_cast<int>(bits.size()) != m) throw std::invalid_argument("map_bits: wrong bit count");
    std::uint32_t label = 0;
    for (int i = 0; i < m; ++i) label |= static_cast<std::uint32_t>(bits[i] & 1u) << i;
    return map_label(label, mod);
}

CVec map_block(std::span<const int> spins, ModId mod) {
    const int m = bits_per_symbol(mod);
    if (spins.empty() || spins.size() % static_cast<std::size_t>(m) != 0)
        throw std::invalid_argument("map_block: spin count not a multiple of bits per symbol");
    std::uint32_t k = 0;
    for (std::size_t i = 0; i < spins.size(); ++i)
        if (spins[i] == -1) k |= 1u << i;
    return map_block_index(k, static_cast<int>(spins.size()) / m, mod);
}

CVec map_block_index(std::uint32_t k, int b, ModId mod) {
    const int m = bits_per_symbol(mod);
    const std::uint32_t mask = (1u << m) - 1u;
    const auto& table = constellation(mod);
    CVec z(b);
    for (int t = 0; t < b; ++t) z(t) = table[(k >> (t * m)) & mask];
    return z;
}

std::uint32_t slice_label(cxd v, ModId mod) {
    const auto& table = constellation(mod);
    const auto& order = lex_ordered_labels(mod);
    std::uint32_t best = order[0];
    double best_d = std::norm(v - table[best]);
    for (std::size_t r = 1; r < order.size(); ++r) {
        const double d = std::norm(v - table[order[r]]);
        if (d < best_d) {
            best_d = d;
            best = order[r];
        }
    }
    return best;
}

cxd slice_symbol(cxd v, ModId mod) { return constellation(mod)[slice_label(v, mod)]; }

CVec slice(const CVec& v, ModId mod) {
    CVec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = slice_symbol(v(i), mod);
    return out;
}

} // namespace bqamd
