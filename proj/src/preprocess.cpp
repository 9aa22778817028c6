#include "bqamd/preprocess.hpp"

#include <algorithm>
#include <stdexcept>

namespace bqamd {

RVec residual_energies(const CMat& H, const CMat& Qsel) {
    RVec out(H.cols());
    if (Qsel.cols() == 0) {
        for (Eigen::Index j = 0; j < H.cols(); ++j) out(j) = H.col(j).squaredNorm();
        return out;
    }
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
        const CVec r = H.col(j) - Qsel * (Qsel.adjoint() * H.col(j));
        out(j) = r.squaredNorm();
    }
    return out;
}

std::vector<int> select_block(const RVec& energies, int b) {
    if (energies.size() == 0) throw std::invalid_argument("select_block: empty candidate set");
    if (b < 1) throw std::invalid_argument("select_block: b must be >= 1");
    std::vector<int> idx(energies.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int c) {
        if (energies(a) != energies(c)) return energies(a) < energies(c);
        return a < c;
    });
    idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(b)));
    return idx;
}

BlockPlan preprocess(const CMat& H, const CVec& y, int b) {
    const int nr = static_cast<int>(H.rows());
    const int nt = static_cast<int>(H.cols());
    if (b < 1) throw std::invalid_argument("preprocess: b must be >= 1");
    if (nr < nt) throw std::invalid_argument("preprocess: more columns than rows");
    if (y.size() != nr) throw std::invalid_argument("preprocess: y dimension mismatch");

    const double tol = 1e-12 * H.norm();

    BlockPlan plan;
    plan.Q = CMat::Zero(nr, nt);
    plan.R = CMat::Zero(nt, nt);
    plan.perm.reserve(nt);

    CMat V = H;                       // residual columns, MGS-updated in place
    CMat Racc = CMat::Zero(nt, nt);   // Racc(i, j_orig): coefficient of q_i in column j_orig
    std::vector<bool> used(nt, false);
    int t = 0;

    while (t < nt) {
        const int bb = std::min(b, nt - t);
        plan.block_starts.push_back(t);
        plan.block_sizes.push_back(bb);

        // Current residual energies of the unselected columns.
        std::vector<int> cand;
        cand.reserve(nt - t);
        for (int j = 0; j < nt; ++j)
            if (!used[j]) cand.push_back(j);
        RVec energies(cand.size());
        for (std::size_t i = 0; i < cand.size(); ++i) energies(i) = V.col(cand[i]).squaredNorm();

        const std::vector<int> chosen = select_block(energies, bb);
        for (int pos : chosen) {
            const int j = cand[pos];
            CVec v = V.col(j);
            // Reorthogonalization pass against the basis built so far.
            for (int i = 0; i < t; ++i) {
                const cxd c = plan.Q.col(i).dot(v);
                v -= plan.Q.col(i) * c;
                Racc(i, j) += c;
            }
            const double nrm = v.norm();
            if (nrm <= tol) throw std::runtime_error("preprocess: rank-deficient channel matrix");
            plan.Q.col(t) = v / nrm;
            Racc(t, j) = nrm;
            used[j] = true;
            plan.perm.push_back(j);
            for (int u = 0; u < nt; ++u) {
                if (used[u]) continue;
                const cxd c = plan.Q.col(t).dot(V.col(u));
                V.col(u) -= plan.Q.col(t) * c;
                Racc(t, u) += c;
            }
            ++t;
        }
    }

    for (int s = 0; s < nt; ++s) plan.R.col(s).head(s + 1) = Racc.col(plan.perm[s]).head(s + 1);
    plan.y_rot = plan.Q.adjoint() * y;
    return plan;
}

} // namespace bqamd
