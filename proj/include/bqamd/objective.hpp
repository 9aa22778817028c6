#pragma once

#include "bqamd/constellation.hpp"
#include "bqamd/preprocess.hpp"
#include "bqamd/types.hpp"

#include <cstdint>
#include <vector>

namespace bqamd {

struct LambdaSchedule {
    double lambda_min = 0.005;
    double lambda_max = 0.45;
    double rho0 = 13.0;
    double kappa = 0.55;
};

// lambda(rho) = lambda_min + (lambda_max - lambda_min) / (1 + exp(kappa (rho - rho0)));
// saturates to the analytic limits instead of overflowing exp().
double lambda_of(double rho_db, const LambdaSchedule& sched);

// Conditioned local subproblem for one block: minimize over z in X^b
//   ||y_bar - R_diag z||^2 + lambda ||z - z_mmse_ref||^2
// (the second term only when lambda > 0).
struct BlockProblem {
    int ell = 0;
    CVec y_bar;
    CMat R_diag;
    CVec z_mmse_ref; // size 0 when regularization is off
    double lambda = 0.0;
    ModId mod = ModId::QAM16;

    int symbols() const { return static_cast<int>(y_bar.size()); }
    int qubits() const { return symbols() * bits_per_symbol(mod); }
};

// Interference-reduced observation for block ell given the flat suffix
// (symbols of blocks ell+1..L-1, block ell+1 first).
CVec block_observation(const BlockPlan& plan, int ell, const CVec& suffix);

// Regularized least-squares estimate slice((H^H H + sigma2 I)^{-1} H^H y),
// without the slicing.
CVec mmse_estimate(const CMat& H, const CVec& y, double sigma2);

// Hard MMSE reference of block ell in the plan's reordered coordinates.
CVec mmse_reference(const CMat& H, const CVec& y, double sigma2, const BlockPlan& plan, int ell,
                    ModId mod);

// Adopted local metric at the spin assignment encoded by basis index k.
double block_cost(const BlockProblem& prob, std::uint32_t k);
double block_cost(const BlockProblem& prob, std::span<const int> spins);

// All 2^q values of block_cost, indexed by basis index.
RVec block_cost_table(const BlockProblem& prob);

// Multilinear objective over {-1,+1}^q: constant + sum over nonempty subsets
// S (bitmasks) of c_S * prod_{i in S} s_i.
struct SpinPolynomial {
    int q = 0;
    double constant = 0.0;
    std::vector<std::pair<std::uint32_t, double>> terms; // sorted by mask

    int max_degree() const;
    double evaluate_index(std::uint32_t k) const;
};

// Exact parity-basis (Fourier) transform of block_cost via a Walsh-Hadamard
// butterfly over all 2^q assignments; coefficients below 1e-12 are dropped.
// Requires q <= 20.
SpinPolynomial extract_hubo(const BlockProblem& prob);
SpinPolynomial extract_polynomial(const RVec& table, int q);

} // namespace bqamd
