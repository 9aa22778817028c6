#include "bqamd/objective.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace bqamd {

double lambda_of(double rho_db, const LambdaSchedule& sched) {
    const double a = sched.kappa * (rho_db - sched.rho0);
    if (a > 700.0) return sched.lambda_min;
    if (a < -700.0) return sched.lambda_max;
    return sched.lambda_min + (sched.lambda_max - sched.lambda_min) / (1.0 + std::exp(a));
}

CVec block_observation(const BlockPlan& plan, int ell, const CVec& suffix) {
    const int start = plan.block_starts[ell];
    const int bsz = plan.block_sizes[ell];
    const int rest = plan.nt() - (start + bsz);
    if (suffix.size() != rest) throw std::invalid_argument("block_observation: suffix length mismatch");
    CVec out = plan.y_rot.segment(start, bsz);
    if (rest > 0) out -= plan.R.block(start, start + bsz, bsz, rest) * suffix;
    return out;
}

CVec mmse_estimate(const CMat& H, const CVec& y, double sigma2) {
    if (sigma2 < 0.0) throw std::invalid_argument("mmse_estimate: negative noise variance");
    const CMat A = H.adjoint() * H + sigma2 * CMat::Identity(H.cols(), H.cols());
    Eigen::FullPivLU<CMat> lu(A);
    if (!lu.isInvertible()) throw std::runtime_error("mmse_estimate: singular normal matrix");
    return lu.solve(H.adjoint() * y);
}

CVec mmse_reference(const CMat& H, const CVec& y, double sigma2, const BlockPlan& plan, int ell,
                    ModId mod) {
    const CVec hard = slice(mmse_estimate(H, y, sigma2), mod);
    const int start = plan.block_starts[ell];
    const int bsz = plan.block_sizes[ell];
    CVec out(bsz);
    for (int i = 0; i < bsz; ++i) out(i) = hard(plan.perm[start + i]);
    return out;
}

double block_cost(const BlockProblem& prob, std::uint32_t k) {
    if (prob.lambda > 0.0 && prob.z_mmse_ref.size() != prob.symbols())
        throw std::invalid_argument("block_cost: regularization enabled without MMSE reference");
    const CVec z = map_block_index(k, prob.symbols(), prob.mod);
    double cost = (prob.y_bar - prob.R_diag * z).squaredNorm();
    if (prob.lambda > 0.0) cost += prob.lambda * (z - prob.z_mmse_ref).squaredNorm();
    return cost;
}

double block_cost(const BlockProblem& prob, std::span<const int> spins) {
    if (static_cast<int>(spins.size()) != prob.qubits())
        throw std::invalid_argument("block_cost: spin length mismatch");
    std::uint32_t k = 0;
    for (std::size_t i = 0; i < spins.size(); ++i)
        if (spins[i] == -1) k |= 1u << i;
    return block_cost(prob, k);
}

RVec block_cost_table(const BlockProblem& prob) {
    const int q = prob.qubits();
    if (q > 20) throw std::invalid_argument("block_cost_table: q above exhaustive bound");
    if (prob.lambda > 0.0 && prob.z_mmse_ref.size() != prob.symbols())
        throw std::invalid_argument("block_cost_table: regularization enabled without MMSE reference");

    const int b = prob.symbols();
    const int m = bits_per_symbol(prob.mod);
    const int M = 1 << m;
    const auto& table = constellation(prob.mod);
    const std::uint32_t n = 1u << q;

    RVec out(n);
    CVec acc(b);
    for (std::uint32_t k = 0; k < n; ++k) {
        acc = prob.y_bar;
        double pen = 0.0;
        for (int t = 0; t < b; ++t) {
            const cxd z = table[(k >> (t * m)) & (M - 1u)];
            acc.head(t + 1) -= prob.R_diag.col(t).head(t + 1) * z;
            if (prob.lambda > 0.0) pen += std::norm(z - prob.z_mmse_ref(t));
        }
        out(k) = acc.squaredNorm() + prob.lambda * pen;
    }
    return out;
}

int SpinPolynomial::max_degree() const {
    int deg = 0;
    for (const auto& [mask, coef] : terms) deg = std::max(deg, std::popcount(mask));
    return deg;
}

double SpinPolynomial::evaluate_index(std::uint32_t k) const {
    double v = constant;
    for (const auto& [mask, coef] : terms)
        v += (std::popcount(mask & k) & 1) ? -coef : coef;
    return v;
}

SpinPolynomial extract_polynomial(const RVec& table, int q) {
    if (q < 0 || q > 20) throw std::invalid_argument("extract_polynomial: q out of range");
    const std::uint32_t n = 1u << q;
    if (table.size() != static_cast<Eigen::Index>(n))
        throw std::invalid_argument("extract_polynomial: table size mismatch");

    // In-place Walsh-Hadamard butterfly; bit value 1 carries spin -1, so the
    // second half of each pair picks up the minus sign.
    RVec w = table;
    for (int i = 0; i < q; ++i) {
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

    const double scale = std::ldexp(1.0, -q);
    SpinPolynomial poly;
    poly.q = q;
    poly.constant = w(0) * scale;
    for (std::uint32_t mask = 1; mask < n; ++mask) {
        const double c = w(mask) * scale;
        if (std::abs(c) >= 1e-12) poly.terms.emplace_back(mask, c);
    }
    return poly;
}

SpinPolynomial extract_hubo(const BlockProblem& prob) {
    const int q = prob.qubits();
    if (q > 20) throw std::invalid_argument("extract_hubo: q above exhaustive bound");
    return extract_polynomial(block_cost_table(prob), q);
}

} // namespace bqamd
