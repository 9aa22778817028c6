#include "bqamd/baselines.hpp"

#include "bqamd/objective.hpp"
#include "bqamd/preprocess.hpp"

#include <algorithm>
#include <stdexcept>

namespace bqamd {

CVec detect_mf(const DetectionInstance& inst) {
    const int nt = static_cast<int>(inst.H.cols());
    CVec out(nt);
    for (int i = 0; i < nt; ++i) {
        const double e = inst.H.col(i).squaredNorm();
        if (e == 0.0) throw std::runtime_error("detect_mf: zero channel column");
        out(i) = slice_symbol(inst.H.col(i).dot(inst.y) / e, inst.mod);
    }
    return out;
}

CVec detect_mmse(const DetectionInstance& inst) {
    return slice(mmse_estimate(inst.H, inst.y, inst.sigma2), inst.mod);
}

namespace {

struct SymPath {
    CVec suffix;
    double ped = 0.0;
    std::vector<std::uint8_t> lex_labels;
    int parent = 0;
};

} // namespace

KbestResult detect_kbest_classical(const DetectionInstance& inst, int K) {
    if (K < 1) throw std::invalid_argument("detect_kbest_classical: K must be >= 1");
    const int nt = static_cast<int>(inst.H.cols());
    const int m = bits_per_symbol(inst.mod);
    const int M = mod_order(inst.mod);
    const auto& points = constellation(inst.mod);
    const BlockPlan plan = preprocess(inst.H, inst.y, 1);

    std::vector<SymPath> frontier(1);
    frontier[0].suffix = CVec(0);

    std::vector<SymPath> children;
    for (int i = nt - 1; i >= 0; --i) {
        children.clear();
        for (std::size_t pi = 0; pi < frontier.size(); ++pi) {
            const SymPath& parent = frontier[pi];
            cxd ybar = plan.y_rot(i);
            const int rest = nt - 1 - i;
            for (int j = 0; j < rest; ++j) ybar -= plan.R(i, i + 1 + j) * parent.suffix(j);

            for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(M); ++label) {
                SymPath child;
                child.suffix = CVec(1 + rest);
                child.suffix(0) = points[label];
                child.suffix.tail(rest) = parent.suffix;
                child.ped = parent.ped + std::norm(ybar - plan.R(i, i) * points[label]);
                child.lex_labels.reserve(1 + parent.lex_labels.size());
                child.lex_labels.push_back(static_cast<std::uint8_t>(bit_reverse(label, m)));
                child.lex_labels.insert(child.lex_labels.end(), parent.lex_labels.begin(),
                                        parent.lex_labels.end());
                child.parent = static_cast<int>(pi);
                children.push_back(std::move(child));
            }
        }
        std::sort(children.begin(), children.end(), [](const SymPath& a, const SymPath& b) {
            if (a.ped != b.ped) return a.ped < b.ped;
            if (a.lex_labels != b.lex_labels) return a.lex_labels < b.lex_labels;
            return a.parent < b.parent;
        });
        if (static_cast<int>(children.size()) > K) children.resize(K);
        frontier = children;
    }

    const SymPath& best = frontier.front();
    KbestResult result;
    result.x_hat = CVec(nt);
    for (int s = 0; s < nt; ++s) result.x_hat(plan.perm[s]) = best.suffix(s);
    result.final_ped = best.ped;
    return result;
}

} // namespace bqamd
