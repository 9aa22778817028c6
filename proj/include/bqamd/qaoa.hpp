#pragma once

#include "bqamd/objective.hpp"
#include "bqamd/rng.hpp"
#include "bqamd/types.hpp"

#include <cstdint>
#include <vector>

namespace bqamd {

// Diagonal cost Hamiltonian tabulated over the 2^q computational basis states
// (basis-index convention from constellation.hpp); the polynomial's constant
// term is omitted.
struct CostVector {
    int q = 0;
    RVec values;
};

struct QaoaParams {
    RVec gammas;
    RVec betas;
    int depth() const { return static_cast<int>(gammas.size()); }
};

CostVector build_cost_vector(const SpinPolynomial& poly);

// p-layer ansatz on |+>^q: per layer, the diagonal phase e^{-i gamma c_k}
// followed by e^{-i beta X} on every qubit. O(p q 2^q).
CVec run_ansatz(const CostVector& cost, const QaoaParams& params);

// <psi| H_C |psi>, computed exactly from the state vector.
double expectation(const CostVector& cost, const QaoaParams& params);

// Computational-basis measurements; (bitstring, count) pairs sorted by
// bitstring, distinct entries only.
std::vector<std::pair<std::uint32_t, int>> sample_state(const CVec& psi, int n_shots,
                                                        RngStream& rng);
std::vector<std::pair<std::uint32_t, int>> sample(const CostVector& cost, const QaoaParams& params,
                                                  int n_shots, RngStream& rng);

struct TrainResult {
    QaoaParams params;
    double value = 0.0;
    long evals = 0;
};

// Derivative-free training: Nelder-Mead from a linear-ramp start plus
// `restarts` uniform-random starts (gamma in [-pi/2, pi/2], beta in
// [-pi/4, pi/4]), each capped at `budget` evaluations.
TrainResult direct_train(const CostVector& cost, int p, long budget, int restarts, RngStream& rng);

} // namespace bqamd
