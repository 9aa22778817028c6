#pragma once

#include "bqamd/types.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace bqamd {

struct NmResult {
    RVec x;
    double fx = 0.0;
    long evals = 0;
};

// Standard Nelder-Mead simplex search with a hard evaluation budget.
// Returns the best point ever evaluated, which may be an interior trial point
// rather than a simplex vertex.
inline NmResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0,
                            double step, long max_evals) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    NmResult best;
    best.x = x0;
    best.fx = std::numeric_limits<double>::infinity();
    long evals = 0;
    auto eval = [&](const RVec& x) {
        const double v = f(x);
        ++evals;
        if (v < best.fx) {
            best.fx = v;
            best.x = x;
        }
        return v;
    };

    std::vector<RVec> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (int i = 0; i < n; ++i) xs[i + 1](i) += step;
    for (int i = 0; i <= n && evals < max_evals; ++i) fs[i] = eval(xs[i]);

    std::vector<int> order(n + 1);
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (fs[a] != fs[b]) return fs[a] < fs[b];
            return a < b;
        });
        {
            std::vector<RVec> xs2(n + 1);
            std::vector<double> fs2(n + 1);
            for (int i = 0; i <= n; ++i) {
                xs2[i] = xs[order[i]];
                fs2[i] = fs[order[i]];
            }
            xs.swap(xs2);
            fs.swap(fs2);
        }

        RVec centroid = RVec::Zero(n);
        for (int i = 0; i < n; ++i) centroid += xs[i];
        centroid /= n;

        const RVec xr = centroid + alpha * (centroid - xs[n]);
        const double fr = eval(xr);
        if (evals >= max_evals) break;

        if (fr < fs[0]) {
            const RVec xe = centroid + gamma * (xr - centroid);
            const double fe = eval(xe);
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else {
            const bool outside = fr < fs[n];
            const RVec xc = outside ? RVec(centroid + rho * (xr - centroid))
                                    : RVec(centroid + rho * (xs[n] - centroid));
            const double fc = eval(xc);
            if (fc < (outside ? fr : fs[n])) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                for (int i = 1; i <= n && evals < max_evals; ++i) {
                    xs[i] = xs[0] + sigma * (xs[i] - xs[0]);
                    fs[i] = eval(xs[i]);
                }
            }
        }
    }
    best.evals = evals;
    return best;
}

} // namespace bqamd
