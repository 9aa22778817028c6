#pragma once

#include "bqamd/types.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace bqamd {

// Bit / spin / basis-index conventions shared by every module:
//
//   * A q-variable spin assignment is identified with a basis index
//     k in [0, 2^q): bit i of k (i = 0 at the LSB) holds bit b_{i+1},
//     and spin s_{i+1} = 1 - 2 * bit_i(k).
//   * Symbol t (0-based) of a block occupies bits [t*m, (t+1)*m) of k,
//     with the mapper's first bit b0 at the lowest of those positions.
//   * A symbol "label" is its m bits packed LSB-first (b0 at bit 0),
//     i.e. label = (k >> t*m) & (M - 1).
//   * "Lexicographically smallest bit label" compares the bit string
//     b0 b1 ... b_{m-1} left to right, which is numeric order of the
//     bit-reversed label.

enum class ModId { QPSK, QAM16 };

inline int bits_per_symbol(ModId mod) { return mod == ModId::QPSK ? 2 : 4; }
inline int mod_order(ModId mod) { return 1 << bits_per_symbol(mod); }
inline const char* mod_name(ModId mod) { return mod == ModId::QPSK ? "QPSK" : "QAM16"; }
ModId mod_from_name(const std::string& name);

inline std::uint32_t bit_reverse(std::uint32_t v, int m) {
    std::uint32_t r = 0;
    for (int i = 0; i < m; ++i) r |= ((v >> i) & 1u) << (m - 1 - i);
    return r;
}

// Gray-coded constellation points indexed by LSB-first bit label.
// QPSK:  d = [(1-2b0) + j(1-2b1)] / sqrt(2)
// 16QAM: d = [(1-2b0)(2-(1-2b2)) + j(1-2b1)(2-(1-2b3))] / sqrt(10)
const std::vector<cxd>& constellation(ModId mod);

// Labels sorted by lexicographic bit-string order (b0 most significant).
const std::vector<std::uint32_t>& lex_ordered_labels(ModId mod);

cxd map_label(std::uint32_t label, ModId mod);
cxd map_bits(std::span<const std::uint8_t> bits, ModId mod);

// Per-symbol spin-form mapper applied across a block; spins in the shared
// index convention (symbol t at spin positions t*m .. t*m+m-1).
CVec map_block(std::span<const int> spins, ModId mod);
CVec map_block_index(std::uint32_t k, int b, ModId mod);

// Nearest constellation point; exact ties go to the lexicographically
// smallest bit label.
std::uint32_t slice_label(cxd v, ModId mod);
cxd slice_symbol(cxd v, ModId mod);
CVec slice(const CVec& v, ModId mod);

} // namespace bqamd
