#include "bqamd/config.hpp"
#include "bqamd/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

using namespace bqamd;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path,
                  const std::string& detectors, const std::string& snr_spec, long trials,
                  long long seed, const std::string& bank_path, int threads) {
    SweepConfig cfg =
        config_path.empty() ? SweepConfig::table1() : sweep_from_config(load_config_file(config_path));
    if (!detectors.empty()) cfg.detectors = split_list(detectors);
    if (!snr_spec.empty()) cfg.snr_grid = parse_snr_spec(snr_spec);
    if (trials > 0) cfg.trials = static_cast<int>(trials);
    if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
    if (!bank_path.empty()) cfg.bank_path = bank_path;
    if (threads > 0) cfg.threads = threads;
    cfg.validate();

    TemplateBank bank;
    const TemplateBank* bank_ptr = nullptr;
    const bool wants_transfer =
        std::find(cfg.detectors.begin(), cfg.detectors.end(), std::string("qaoa-transfer")) !=
        cfg.detectors.end();
    if (wants_transfer) {
        if (cfg.bank_path.empty())
            throw std::invalid_argument("sweep: transfer detector needs --bank or bank= in config");
        bank = load_bank(cfg.bank_path);
        bank_ptr = &bank;
    }

    const SweepResult result = run_sweep(cfg, bank_ptr);
    if (!out_path.empty()) write_csv(out_path, result.records);

    // Summarize detectors that cover the full grid.
    std::vector<BerRecord> complete;
    for (const BerRecord& r : result.records) {
        const auto it = cfg.snr_mask.find(r.detector);
        if (it == cfg.snr_mask.end() || it->second.empty()) complete.push_back(r);
    }
    if (!complete.empty()) std::cout << render_summary(summarize(complete, cfg.snr_grid));
    if (!out_path.empty()) std::cout << "records written to " << out_path << "\n";
    return 0;
}

int run_build_bank_cmd(const std::string& config_path, const std::string& out_path, long long seed,
                       int threads) {
    BankBuildConfig bc = config_path.empty() ? BankBuildConfig{} : bank_from_config(load_config_file(config_path));
    if (bc.snr_grid.empty()) bc.snr_grid = SweepConfig::table1().snr_grid;
    if (seed >= 0) bc.master_seed = static_cast<std::uint64_t>(seed);
    if (threads > 0) bc.threads = threads;
    const TemplateBank bank = build_bank(bc);
    save_bank(bank, out_path);
    std::cout << "bank with " << bank.entries.size() << " SNR entries written to " << out_path
              << "\n";
    return 0;
}

// ---- desk-scale verification suite (oracle subcommand) ----

bool report(const char* name, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    return ok;
}

CVec brute_force_ml(const DetectionInstance& inst) {
    const int nt = static_cast<int>(inst.H.cols());
    const int M = mod_order(inst.mod);
    const auto& points = constellation(inst.mod);
    long total = 1;
    for (int i = 0; i < nt; ++i) total *= M;

    CVec best, x(nt);
    double best_v = std::numeric_limits<double>::infinity();
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        for (int i = 0; i < nt; ++i) {
            x(i) = points[rem % M];
            rem /= M;
        }
        const double v = (inst.y - inst.H * x).squaredNorm();
        if (v < best_v) {
            best_v = v;
            best = x;
        }
    }
    return best;
}

// Straight-line greedy blockwise SIC sharing only the preprocessing stage.
CVec greedy_blockwise_sic(const DetectionInstance& inst, const DetectorConfig& cfg) {
    const BlockPlan plan = preprocess(inst.H, inst.y, cfg.b);
    const int L = plan.num_blocks();
    const int m = bits_per_symbol(inst.mod);

    double lam = 0.0;
    CVec ref;
    if (cfg.regularize) {
        lam = lambda_of(inst.snr_db, cfg.lambda);
        const CVec hard = slice(mmse_estimate(inst.H, inst.y, inst.sigma2), inst.mod);
        ref = CVec(plan.nt());
        for (int s = 0; s < plan.nt(); ++s) ref(s) = hard(plan.perm[s]);
    }

    CVec suffix(0);
    for (int ell = L - 1; ell >= 0; --ell) {
        const int start = plan.block_starts[ell];
        const int bsz = plan.block_sizes[ell];
        const int rest = plan.nt() - (start + bsz);
        CVec ybar = plan.y_rot.segment(start, bsz);
        for (int j = 0; j < rest; ++j)
            ybar -= plan.R.col(start + bsz + j).segment(start, bsz) * suffix(j);

        const std::uint32_t n = 1u << (bsz * m);
        std::uint32_t best_k = 0;
        double best_v = std::numeric_limits<double>::infinity();
        for (std::uint32_t k = 0; k < n; ++k) {
            const CVec z = map_block_index(k, bsz, inst.mod);
            double v = (ybar - plan.R.block(start, start, bsz, bsz) * z).squaredNorm();
            if (cfg.regularize) v += lam * (z - ref.segment(start, bsz)).squaredNorm();
            if (v < best_v) {
                best_v = v;
                best_k = k;
            }
        }
        const CVec z = map_block_index(best_k, bsz, inst.mod);
        CVec next(bsz + suffix.size());
        next.head(bsz) = z;
        next.tail(suffix.size()) = suffix;
        suffix = next;
    }
    CVec x_hat(plan.nt());
    for (int s = 0; s < plan.nt(); ++s) x_hat(plan.perm[s]) = suffix(s);
    return x_hat;
}

int run_oracle_cmd(long long seed_arg) {
    const std::uint64_t seed = seed_arg >= 0 ? static_cast<std::uint64_t>(seed_arg) : 7;
    bool all_ok = true;

    { // standards-mapped constellations
        bool ok = true;
        for (std::uint32_t label = 0; label < 16; ++label) {
            const double s0 = 1.0 - 2.0 * (label & 1u), s1 = 1.0 - 2.0 * ((label >> 1) & 1u);
            const double s2 = 1.0 - 2.0 * ((label >> 2) & 1u), s3 = 1.0 - 2.0 * ((label >> 3) & 1u);
            const cxd want = cxd(s0 * (2.0 - s2), s1 * (2.0 - s3)) / std::sqrt(10.0);
            ok = ok && std::abs(map_label(label, ModId::QAM16) - want) < 1e-15;
        }
        for (std::uint32_t label = 0; label < 4; ++label) {
            const double s0 = 1.0 - 2.0 * (label & 1u), s1 = 1.0 - 2.0 * ((label >> 1) & 1u);
            ok = ok && std::abs(map_label(label, ModId::QPSK) - cxd(s0, s1) / std::sqrt(2.0)) < 1e-15;
        }
        all_ok &= report("constellation mapper matches standard formulas", ok);
    }

    { // HUBO exactness on random regularized blocks
        bool ok = true;
        RngStream rng(seed);
        for (int trial = 0; trial < 20 && ok; ++trial) {
            const DetectionInstance inst = generate_instance(4, 4, ModId::QAM16, 14.0, rng);
            const BlockPlan plan = preprocess(inst.H, inst.y, 2);
            BlockProblem prob;
            prob.y_bar = plan.y_rot.segment(0, 2);
            prob.R_diag = plan.R.block(0, 0, 2, 2);
            prob.mod = ModId::QAM16;
            prob.lambda = trial % 2 ? 0.25 : 0.0;
            if (prob.lambda > 0) prob.z_mmse_ref = mmse_reference(inst.H, inst.y, inst.sigma2, plan, 0, inst.mod);
            const SpinPolynomial poly = extract_hubo(prob);
            for (std::uint32_t k = 0; k < 256; ++k)
                ok = ok && std::abs(poly.evaluate_index(k) - block_cost(prob, k)) < 1e-9;
        }
        all_ok &= report("Gray-HUBO extraction reproduces the block metric", ok);
    }

    { // engine identities
        bool ok = true;
        RngStream rng(seed + 1);
        SpinPolynomial poly;
        poly.q = 4;
        for (std::uint32_t mask = 1; mask < 16; ++mask)
            poly.terms.emplace_back(mask, rng.next_double() - 0.5);
        const CostVector cv = build_cost_vector(poly);
        QaoaParams zero{RVec::Zero(2), RVec::Zero(2)};
        ok = ok && std::abs(expectation(cv, zero) - cv.values.mean()) < 1e-12;

        SpinPolynomial z1;
        z1.q = 1;
        z1.terms.emplace_back(1u, 1.0);
        const CostVector cz = build_cost_vector(z1);
        for (int i = 0; i < 10 && ok; ++i) {
            for (int j = 0; j < 10 && ok; ++j) {
                const double g = -M_PI + 2 * M_PI * i / 9.0, b = -M_PI + 2 * M_PI * j / 9.0;
                QaoaParams prm{RVec::Constant(1, g), RVec::Constant(1, b)};
                ok = ok && std::abs(expectation(cz, prm) - std::sin(2 * b) * std::sin(2 * g)) < 1e-9;
            }
        }
        all_ok &= report("QAOA engine closed-form identities", ok);
    }

    { // exact ML equivalence, blockwise detector
        bool ok = true;
        RngStream rng(seed + 2);
        DetectorConfig cfg;
        cfg.b = 2;
        cfg.T = 256;
        cfg.K = 65536;
        cfg.mode = SolverMode::Exhaustive;
        cfg.regularize = false;
        for (int t = 0; t < 3 && ok; ++t) {
            const DetectionInstance inst = generate_instance(4, 4, ModId::QAM16, 12.0, rng);
            RngStream det_rng(0);
            const DetectResult res = detect(inst, cfg, nullptr, det_rng);
            ok = ok && (res.x_hat - brute_force_ml(inst)).norm() == 0.0;
        }
        all_ok &= report("blockwise detector with full lists equals brute-force ML", ok);
    }

    { // exact ML equivalence, classical K-best
        bool ok = true;
        RngStream rng(seed + 3);
        for (int t = 0; t < 5 && ok; ++t) {
            const DetectionInstance inst = generate_instance(3, 3, ModId::QPSK, 10.0, rng);
            ok = ok && (detect_kbest_classical(inst, 4096).x_hat - brute_force_ml(inst)).norm() == 0.0;
        }
        all_ok &= report("classical K-best with full width equals brute-force ML", ok);
    }

    { // greedy degenerate mode
        bool ok = true;
        RngStream rng(seed + 4);
        DetectorConfig cfg;
        cfg.T = 1;
        cfg.K = 1;
        cfg.mode = SolverMode::Exhaustive;
        cfg.regularize = true;
        for (int t = 0; t < 10 && ok; ++t) {
            const DetectionInstance inst = generate_instance(8, 8, ModId::QAM16, 16.0, rng);
            RngStream det_rng(0);
            const DetectResult res = detect(inst, cfg, nullptr, det_rng);
            ok = ok && (res.x_hat - greedy_blockwise_sic(inst, cfg)).norm() == 0.0;
        }
        all_ok &= report("T=K=1 equals greedy blockwise SIC", ok);
    }

    { // structural counter bound at defaults
        bool ok = true;
        RngStream rng(seed + 5);
        DetectorConfig cfg; // Table I defaults, exhaustive for speed
        cfg.mode = SolverMode::Exhaustive;
        for (int t = 0; t < 10 && ok; ++t) {
            const DetectionInstance inst = generate_instance(16, 16, ModId::QAM16, 18.0, rng);
            RngStream det_rng(0);
            const DetectResult res = detect(inst, cfg, nullptr, det_rng);
            const BlockPlan plan = preprocess(inst.H, inst.y, cfg.b);
            const std::uint64_t bound = 1 + (plan.num_blocks() - 1) * static_cast<std::uint64_t>(cfg.K);
            ok = ok && res.counters.local_calls <= bound;
        }
        all_ok &= report("local-call counter respects 1+(L-1)K", ok);
    }

    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BQA-MD blockwise MIMO detection toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, detectors, snr_spec, bank_path;
    long trials = 0;
    long long seed = -1;
    int threads = 0;

    CLI::App* sweep = app.add_subcommand("sweep", "run a BER sweep and write CSV records");
    sweep->add_option("--config", config_path, "TOML config file");
    sweep->add_option("--out", out_path, "output CSV path");
    sweep->add_option("--seed", seed, "master seed override");
    sweep->add_option("--detectors", detectors, "comma-separated detector list");
    sweep->add_option("--snr", snr_spec, "SNR grid a:step:b in dB");
    sweep->add_option("--trials", trials, "trials per SNR point");
    sweep->add_option("--bank", bank_path, "template bank JSON path");
    sweep->add_option("--threads", threads, "worker thread cap");

    CLI::App* bank = app.add_subcommand("build-bank", "build the offline QAOA template bank");
    bank->add_option("--config", config_path, "TOML config file");
    bank->add_option("--out", out_path, "output bank JSON path")->required();
    bank->add_option("--seed", seed, "master seed override");
    bank->add_option("--threads", threads, "worker thread cap");

    CLI::App* oracle = app.add_subcommand("oracle", "run the desk-scale verification suites");
    oracle->add_option("--seed", seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed())
            return run_sweep_cmd(config_path, out_path, detectors, snr_spec, trials, seed,
                                 bank_path, threads);
        if (bank->parsed()) return run_build_bank_cmd(config_path, out_path, seed, threads);
        if (oracle->parsed()) return run_oracle_cmd(seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
