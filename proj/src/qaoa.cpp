#include "bqamd/qaoa.hpp"

#include "bqamd/nelder_mead.hpp"
#include "bqamd/vec_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bqamd {

CostVector build_cost_vector(const SpinPolynomial& poly) {
    if (poly.q > 20) throw std::invalid_argument("build_cost_vector: q above bound");
    const std::uint32_t n = 1u << poly.q;
    RVec w = RVec::Zero(n);
    for (const auto& [mask, coef] : poly.terms) w(mask) = coef;
    // Inverse parity transform: same butterfly, no scaling.
    for (int i = 0; i < poly.q; ++i) {
        const std::uint32_t stride = 1u << i;
        for (std::uint32_t base = 0; base < n; base += 2 * stride) {
            for (std::uint32_t off = 0; off < stride; ++off) {
                const double a = w(base + off);
                const double c = w(base + off + stride);
                w(base + off) = a + c;
                w(base + off + stride) = a - c;
            }
        }
    }
    return CostVector{poly.q, std::move(w)};
}

CVec run_ansatz(const CostVector& cost, const QaoaParams& params) {
    const int p = params.depth();
    if (p < 1 || params.betas.size() != p) throw std::invalid_argument("run_ansatz: bad depth");
    const int q = cost.q;
    const Eigen::Index n = Eigen::Index(1) << q;

    // |+>^q; exact dyadic amplitude for even q.
    const double amp0 = (q % 2 == 0) ? std::ldexp(1.0, -q / 2) : std::ldexp(std::sqrt(0.5), -(q - 1) / 2);
    CVec psi = CVec::Constant(n, cxd(amp0, 0.0));

    Eigen::ArrayXd ang(n), ca(n), sa(n);
    for (int r = 0; r < p; ++r) {
        ang = (-params.gammas(r)) * cost.values.array();
        vec_sincos(ang.data(), sa.data(), ca.data(), n);
        cxd* s = psi.data();
        for (Eigen::Index k = 0; k < n; ++k) s[k] *= cxd(ca(k), sa(k));

        const double cb = std::cos(params.betas(r));
        const double sb = std::sin(params.betas(r));
        for (int i = 0; i < q; ++i) {
            const Eigen::Index stride = Eigen::Index(1) << i;
            for (Eigen::Index base = 0; base < n; base += 2 * stride) {
                cxd* lo = s + base;
                cxd* hi = lo + stride;
                for (Eigen::Index off = 0; off < stride; ++off) {
                    const double ar = lo[off].real(), ai = lo[off].imag();
                    const double br = hi[off].real(), bi = hi[off].imag();
                    lo[off] = cxd(cb * ar + sb * bi, cb * ai - sb * br);
                    hi[off] = cxd(cb * br + sb * ai, cb * bi - sb * ar);
                }
            }
        }
    }
    psi /= psi.norm();
    return psi;
}

double expectation(const CostVector& cost, const QaoaParams& params) {
    const CVec psi = run_ansatz(cost, params);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) acc += cost.values(k) * std::norm(psi(k));
    return acc;
}

std::vector<std::pair<std::uint32_t, int>> sample_state(const CVec& psi, int n_shots,
                                                        RngStream& rng) {
    if (n_shots < 1) throw std::invalid_argument("sample_state: n_shots must be >= 1");
    const Eigen::Index n = psi.size();
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        acc += std::norm(psi(k));
        cdf[k] = acc;
    }
    std::vector<int> counts(n, 0);
    for (int s = 0; s < n_shots; ++s) {
        const double u = rng.next_double() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const Eigen::Index k = std::min<Eigen::Index>(it - cdf.begin(), n - 1);
        ++counts[k];
    }
    std::vector<std::pair<std::uint32_t, int>> out;
    for (Eigen::Index k = 0; k < n; ++k)
        if (counts[k] > 0) out.emplace_back(static_cast<std::uint32_t>(k), counts[k]);
    return out;
}

std::vector<std::pair<std::uint32_t, int>> sample(const CostVector& cost, const QaoaParams& params,
                                                  int n_shots, RngStream& rng) {
    return sample_state(run_ansatz(cost, params), n_shots, rng);
}

TrainResult direct_train(const CostVector& cost, int p, long budget, int restarts, RngStream& rng) {
    if (budget < 2 * p + 1) throw std::invalid_argument("direct_train: budget below simplex size");
    long evals = 0;
    auto objective = [&](const RVec& theta) {
        QaoaParams prm{theta.head(p), theta.tail(p)};
        ++evals;
        return expectation(cost, prm);
    };

    std::vector<RVec> starts;
    RVec ramp(2 * p);
    for (int r = 0; r < p; ++r) {
        ramp(r) = 0.2 * static_cast<double>(r + 1) / p;
        ramp(p + r) = 0.2 * (1.0 - static_cast<double>(r + 1) / p);
    }
    starts.push_back(ramp);
    for (int s = 0; s < restarts; ++s) {
        RVec x(2 * p);
        for (int r = 0; r < p; ++r) x(r) = (rng.next_double() - 0.5) * M_PI;
        for (int r = 0; r < p; ++r) x(p + r) = (rng.next_double() - 0.5) * M_PI_2;
        starts.push_back(x);
    }

    RVec best_x;
    double best_f = std::numeric_limits<double>::infinity();
    for (const RVec& x0 : starts) {
        auto wrapped = [&](const RVec& x) { return objective(x); };
        const NmResult r = nelder_mead(wrapped, x0, 0.1, budget);
        if (r.fx < best_f) {
            best_f = r.fx;
            best_x = r.x;
        }
    }

    TrainResult out;
    out.params = QaoaParams{best_x.head(p), best_x.tail(p)};
    out.value = best_f;
    out.evals = evals;
    return out;
}

} // namespace bqamd
