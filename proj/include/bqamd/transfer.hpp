#pragma once

#include "bqamd/counters.hpp"
#include "bqamd/model.hpp"
#include "bqamd/objective.hpp"
#include "bqamd/qaoa.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bqamd {

struct BankTemplate {
    QaoaParams params;
    double score = 0.0; // mean normalized optimality gap on the training set
};

// SNR-indexed store of pre-trained QAOA parameter vectors. Lookup snaps to
// the nearest grid point (ties toward the lower SNR); no interpolation.
struct TemplateBank {
    int depth = 0;
    int qubits = 0;
    int block_size = 0;
    ModId mod = ModId::QAM16;
    int k_temp = 0;
    LambdaSchedule lambda;
    std::uint64_t master_seed = 0;
    int n_ref = 0;
    std::vector<std::pair<double, std::vector<BankTemplate>>> entries; // sorted by snr_db

    const std::vector<BankTemplate>& lookup(double rho_db) const;
};

struct BankBuildConfig {
    int nt = 16;
    int nr = 16;
    ModId mod = ModId::QAM16;
    int block_size = 2;
    int depth = 4;
    std::vector<double> snr_grid;
    int n_ref = 32;
    int k_temp = 4;
    LambdaSchedule lambda;
    long offline_budget = 500;
    int offline_restarts = 8;
    std::uint64_t master_seed = 1;
    int threads = 0; // 0 = hardware default (capped by BQAMD_THREADS)
};

// Offline construction: per grid SNR, train on n_ref genie-conditioned block
// instances, score every trained vector by its mean normalized gap across all
// n_ref cost vectors, and keep the k_temp best.
TemplateBank build_bank(const BankBuildConfig& cfg);

// Versioned JSON document; numbers round-trip at full double precision.
void save_bank(const TemplateBank& bank, const std::string& path);
TemplateBank load_bank(const std::string& path);

// One sampled local solution with its exact (recomputed) adopted metric.
struct LocalCandidate {
    std::uint32_t spin_index = 0;
    CVec symbols;
    double exact_metric = 0.0;
    double freq = 0.0;
};

// Fixed-parameter inference with every stored template, block mixing of the
// sampled candidates, dedup by spin string, rank by exact metric, keep T.
std::vector<LocalCandidate> solve_block_transfer(const BlockProblem& prob,
                                                 const TemplateBank& bank, double rho_db, int T,
                                                 int n_shots, RngStream& rng,
                                                 DetectCounters* counters = nullptr);

// Per-instance training replaces the bank lookup; a single trained vector.
std::vector<LocalCandidate> solve_block_direct(const BlockProblem& prob, int p, int T, int n_shots,
                                               long budget, int restarts, RngStream& rng,
                                               DetectCounters* counters = nullptr);

} // namespace bqamd
