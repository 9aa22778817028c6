#pragma once

#include <cstdint>

namespace bqamd {

// Structural runtime counters; exposed for analysis, never used for control
// flow.
struct DetectCounters {
    std::uint64_t local_calls = 0;     // conditioned local subproblems solved
    std::uint64_t qaoa_inferences = 0; // fixed-parameter ansatz executions
    std::uint64_t optimizer_evals = 0; // online objective evaluations
    std::uint64_t ped_updates = 0;     // child path metric updates

    DetectCounters& operator+=(const DetectCounters& o) {
        local_calls += o.local_calls;
        qaoa_inferences += o.qaoa_inferences;
        optimizer_evals += o.optimizer_evals;
        ped_updates += o.ped_updates;
        return *this;
    }
};

} // namespace bqamd
