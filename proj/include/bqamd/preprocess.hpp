#pragma once

#include "bqamd/types.hpp"

#include <vector>

namespace bqamd {

// Result of block-sorted QR preprocessing. Column s of H*Pi is
// H.col(perm[s]); blocks are listed in construction order (detection
// traverses them backwards, last block first).
struct BlockPlan {
    std::vector<int> perm;        // perm[s] = original column at reordered position s
    std::vector<int> block_sizes; // all equal to b except at most one smaller final block
    std::vector<int> block_starts;
    CMat Q;                       // nr x nt, orthonormal columns
    CMat R;                       // nt x nt upper triangular, real nonnegative diagonal
    CVec y_rot;                   // Q^H y

    int nt() const { return static_cast<int>(perm.size()); }
    int num_blocks() const { return static_cast<int>(block_sizes.size()); }
};

// Entry j = ||(I - Qsel Qsel^H) h_j||^2 for every column of H. Qsel may have
// zero columns, in which case this is just the squared column norms.
RVec residual_energies(const CMat& H, const CMat& Qsel);

// Positions of the min(b, n) smallest energies, ascending by (energy, index).
// Exact subset minimizer of the summed residual energy, since the block
// Frobenius energy decomposes column-wise.
std::vector<int> select_block(const RVec& energies, int b);

// Fixed-size blockwise sorted QR via modified Gram-Schmidt with one
// reorthogonalization pass. Within a block, columns are appended in ascending
// selection-time residual energy (ties by original index).
BlockPlan preprocess(const CMat& H, const CVec& y, int b);

} // namespace bqamd
