#include "bqamd/detector.hpp"

#include "bqamd/preprocess.hpp"

#include <algorithm>
#include <stdexcept>

namespace bqamd {

std::vector<LocalCandidate> solve_block_exhaustive(const BlockProblem& prob, int T) {
    if (T < 1) throw std::invalid_argument("solve_block_exhaustive: T must be >= 1");
    const int q = prob.qubits();
    if (q > 20) throw std::invalid_argument("solve_block_exhaustive: q above bound");

    const RVec table = block_cost_table(prob);
    const std::uint32_t n = 1u << q;
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t k = 0; k < n; ++k) idx[k] = k;
    const std::uint32_t keep = std::min<std::uint32_t>(n, static_cast<std::uint32_t>(T));
    std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          if (table(a) != table(b)) return table(a) < table(b);
                          return a < b;
                      });

    std::vector<LocalCandidate> out;
    out.reserve(keep);
    for (std::uint32_t i = 0; i < keep; ++i) {
        LocalCandidate c;
        c.spin_index = idx[i];
        c.symbols = map_block_index(idx[i], prob.symbols(), prob.mod);
        c.exact_metric = table(idx[i]);
        c.freq = 0.0;
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

bool path_less(const Path& a, const Path& b) {
    if (a.ped != b.ped) return a.ped < b.ped;
    if (a.lex_labels != b.lex_labels) return a.lex_labels < b.lex_labels;
    return a.parent < b.parent;
}

void append_lex_labels(std::vector<std::uint8_t>& out, std::uint32_t spin_index, int b, int m) {
    for (int t = 0; t < b; ++t) {
        const std::uint32_t label = (spin_index >> (t * m)) & ((1u << m) - 1u);
        out.push_back(static_cast<std::uint8_t>(bit_reverse(label, m)));
    }
}

} // namespace

DetectResult detect(const DetectionInstance& inst, const DetectorConfig& cfg,
                    const TemplateBank* bank, RngStream& rng, DetectTrace* trace) {
    if (cfg.b < 1 || cfg.T < 1 || cfg.K < 1) throw std::invalid_argument("detect: bad config");
    if ((cfg.mode == SolverMode::Transfer) != (bank != nullptr))
        throw std::invalid_argument("detect: bank must be given exactly in transfer mode");

    const ModId mod = inst.mod;
    const int m = bits_per_symbol(mod);
    const BlockPlan plan = preprocess(inst.H, inst.y, cfg.b);
    const int L = plan.num_blocks();

    double lam = 0.0;
    CVec mmse_ref_reordered;
    if (cfg.regularize) {
        lam = lambda_of(inst.snr_db, cfg.lambda);
        const CVec hard = slice(mmse_estimate(inst.H, inst.y, inst.sigma2), mod);
        mmse_ref_reordered = CVec(plan.nt());
        for (int s = 0; s < plan.nt(); ++s) mmse_ref_reordered(s) = hard(plan.perm[s]);
    }

    DetectCounters counters;
    std::vector<Path> frontier(1);
    frontier[0].suffix = CVec(0);

    std::vector<Path> children;
    for (int ell = L - 1; ell >= 0; --ell) {
        const int start = plan.block_starts[ell];
        const int bsz = plan.block_sizes[ell];

        children.clear();
        std::vector<double> child_adopted; // adopted metrics, same order as children
        for (std::size_t pi = 0; pi < frontier.size(); ++pi) {
            const Path& parent = frontier[pi];

            BlockProblem prob;
            prob.ell = ell;
            prob.y_bar = block_observation(plan, ell, parent.suffix);
            prob.R_diag = plan.R.block(start, start, bsz, bsz);
            prob.lambda = lam;
            prob.mod = mod;
            if (cfg.regularize) prob.z_mmse_ref = mmse_ref_reordered.segment(start, bsz);

            ++counters.local_calls;
            std::vector<LocalCandidate> cands;
            switch (cfg.mode) {
            case SolverMode::Exhaustive:
                cands = solve_block_exhaustive(prob, cfg.T);
                break;
            case SolverMode::Transfer:
                // Residual blocks are narrower than the bank's key width.
                if (bsz == cfg.b)
                    cands = solve_block_transfer(prob, *bank, inst.snr_db, cfg.T, cfg.n_shots, rng,
                                                 &counters);
                else
                    cands = solve_block_exhaustive(prob, cfg.T);
                break;
            case SolverMode::Direct:
                cands = solve_block_direct(prob, cfg.p, cfg.T, cfg.n_shots, cfg.online_budget,
                                           cfg.online_restarts, rng, &counters);
                break;
            }

            for (const LocalCandidate& c : cands) {
                Path child;
                child.suffix = CVec(bsz + parent.suffix.size());
                child.suffix.head(bsz) = c.symbols;
                child.suffix.tail(parent.suffix.size()) = parent.suffix;
                const double delta = (prob.y_bar - prob.R_diag * c.symbols).squaredNorm();
                child.ped = parent.ped + delta;
                child.lex_labels.reserve(bsz + parent.lex_labels.size());
                append_lex_labels(child.lex_labels, c.spin_index, bsz, m);
                child.lex_labels.insert(child.lex_labels.end(), parent.lex_labels.begin(),
                                        parent.lex_labels.end());
                child.parent = static_cast<int>(pi);
                ++counters.ped_updates;
                children.push_back(std::move(child));
                child_adopted.push_back(c.exact_metric + parent.ped);
            }
        }

        // Global pruning by unregularized PED, regardless of the local metric.
        std::vector<int> order(children.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return path_less(children[a], children[b]); });
        const std::size_t keep = std::min<std::size_t>(order.size(), static_cast<std::size_t>(cfg.K));
        std::vector<Path> pruned;
        pruned.reserve(keep);
        for (std::size_t i = 0; i < keep; ++i) pruned.push_back(std::move(children[order[i]]));
        frontier = std::move(pruned);

        if (trace) {
            trace->frontiers.push_back(frontier);
            std::vector<double> adopted_sorted;
            adopted_sorted.reserve(order.size());
            for (int oi : order) adopted_sorted.push_back(child_adopted[oi]);
            trace->regularized_metrics.push_back(std::move(adopted_sorted));
        }
    }

    const Path& best = frontier.front();
    DetectResult result;
    result.x_hat = CVec(plan.nt());
    for (int s = 0; s < plan.nt(); ++s) result.x_hat(plan.perm[s]) = best.suffix(s);
    result.final_ped = best.ped;
    result.counters = counters;
    return result;
}

} // namespace bqamd
