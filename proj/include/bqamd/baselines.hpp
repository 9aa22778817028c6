#pragma once

#include "bqamd/model.hpp"

namespace bqamd {

// Matched filter: per-column normalized correlation, then slicing.
CVec detect_mf(const DetectionInstance& inst);

// Hard linear MMSE: slice((H^H H + sigma2 I)^{-1} H^H y).
CVec detect_mmse(const DetectionInstance& inst);

struct KbestResult {
    CVec x_hat;
    double final_ped = 0.0;
};

// Symbolwise K-best with SQRD ordering (b = 1 residual proxy) and full M-way
// child expansion per parent.
KbestResult detect_kbest_classical(const DetectionInstance& inst, int K);

} // namespace bqamd
