#pragma once

#include "bqamd/counters.hpp"
#include "bqamd/model.hpp"
#include "bqamd/transfer.hpp"

#include <cstdint>
#include <vector>

namespace bqamd {

enum class SolverMode { Transfer, Direct, Exhaustive };

struct DetectorConfig {
    int b = 2;
    int p = 4;
    int T = 4; // local list width
    int K = 4; // global K-best width
    int n_shots = 1024;
    SolverMode mode = SolverMode::Exhaustive;
    bool regularize = true;
    LambdaSchedule lambda;
    long online_budget = 150;
    int online_restarts = 4;

    static DetectorConfig table1(SolverMode mode, bool regularize = true) {
        DetectorConfig cfg;
        cfg.mode = mode;
        cfg.regularize = regularize;
        return cfg;
    }
};

// One retained partial path: block-suffix symbols (current block first) and
// the accumulated unregularized QR-domain PED. lex_labels holds the symbols'
// bit labels in string order (b0 first) for deterministic tie-breaking.
struct Path {
    CVec suffix;
    double ped = 0.0;
    std::vector<std::uint8_t> lex_labels;
    int parent = 0;
};

// Per-level frontier snapshots (after pruning), for tests.
struct DetectTrace {
    std::vector<std::vector<Path>> frontiers;
    std::vector<std::vector<double>> regularized_metrics; // child adopted metrics, sorted like PED children
};

struct DetectResult {
    CVec x_hat;
    double final_ped = 0.0;
    DetectCounters counters;
};

// All 2^q assignments ranked by (exact adopted metric, spin string); top T.
std::vector<LocalCandidate> solve_block_exhaustive(const BlockProblem& prob, int T);

// Backward blockwise K-best propagation (last-constructed block first).
// Local candidate generation uses the configured solver on the adopted
// (optionally regularized) metric; global pruning always uses the
// unregularized PED.
DetectResult detect(const DetectionInstance& inst, const DetectorConfig& cfg,
                    const TemplateBank* bank, RngStream& rng, DetectTrace* trace = nullptr);

} // namespace bqamd
