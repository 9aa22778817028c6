#include "bqamd/transfer.hpp"

#include "bqamd/parallel.hpp"
#include "bqamd/preprocess.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace bqamd {

using nlohmann::json;

const std::vector<BankTemplate>& TemplateBank::lookup(double rho_db) const {
    if (entries.empty()) throw std::runtime_error("TemplateBank::lookup: empty bank");
    const std::pair<double, std::vector<BankTemplate>>* best = &entries.front();
    double best_d = std::abs(rho_db - best->first);
    for (const auto& e : entries) {
        const double d = std::abs(rho_db - e.first);
        if (d < best_d) { // strict: ties stay with the lower grid point
            best_d = d;
            best = &e;
        }
    }
    if (best->second.empty()) throw std::runtime_error("TemplateBank::lookup: empty bank entry");
    return best->second;
}

namespace {

constexpr std::uint64_t kBankSalt = 0x62616e6b2d726566ull; // "bank-ref"

struct RefProblem {
    CostVector cost;
    double cmin = 0.0;
    double cmax = 0.0;
};

} // namespace

TemplateBank build_bank(const BankBuildConfig& cfg) {
    if (cfg.snr_grid.empty()) throw std::invalid_argument("build_bank: empty SNR grid");
    if (cfg.n_ref < cfg.k_temp) throw std::invalid_argument("build_bank: n_ref below k_temp");
    if (cfg.nt < cfg.block_size)
        throw std::invalid_argument("build_bank: no full-size block exists (nt < block size)");

    const int m = bits_per_symbol(cfg.mod);
    TemplateBank bank;
    bank.depth = cfg.depth;
    bank.qubits = cfg.block_size * m;
    bank.block_size = cfg.block_size;
    bank.mod = cfg.mod;
    bank.k_temp = cfg.k_temp;
    bank.lambda = cfg.lambda;
    bank.master_seed = cfg.master_seed;
    bank.n_ref = cfg.n_ref;
    bank.entries.resize(cfg.snr_grid.size());

    parallel_for(static_cast<int>(cfg.snr_grid.size()), cfg.threads, [&](int gi) {
        const double rho = cfg.snr_grid[gi];
        const double lam = lambda_of(rho, cfg.lambda);

        std::vector<QaoaParams> trained;
        std::vector<RefProblem> refs;
        trained.reserve(cfg.n_ref);
        refs.reserve(cfg.n_ref);

        std::uint64_t attempt = 0;
        for (int i = 0; i < cfg.n_ref; ++i) {
            while (true) {
                RngStream rng = RngStream::substream(cfg.master_seed ^ kBankSalt,
                                                     static_cast<std::uint64_t>(gi), attempt++);
                const DetectionInstance inst =
                    generate_instance(cfg.nt, cfg.nr, cfg.mod, rho, rng);
                const BlockPlan plan = preprocess(inst.H, inst.y, cfg.block_size);

                std::vector<int> full;
                for (int l = 0; l < plan.num_blocks(); ++l)
                    if (plan.block_sizes[l] == cfg.block_size) full.push_back(l);
                const int ell = full[static_cast<std::size_t>(i) % full.size()];

                // Genie conditioning: the true transmitted suffix.
                const int start = plan.block_starts[ell];
                const int bsz = plan.block_sizes[ell];
                const int rest = plan.nt() - (start + bsz);
                CVec suffix(rest);
                for (int s = 0; s < rest; ++s) suffix(s) = inst.x(plan.perm[start + bsz + s]);

                BlockProblem prob;
                prob.ell = ell;
                prob.y_bar = block_observation(plan, ell, suffix);
                prob.R_diag = plan.R.block(start, start, bsz, bsz);
                prob.z_mmse_ref = mmse_reference(inst.H, inst.y, inst.sigma2, plan, ell, cfg.mod);
                prob.lambda = lam;
                prob.mod = cfg.mod;

                CostVector cv = build_cost_vector(extract_hubo(prob));
                const double cmin = cv.values.minCoeff();
                const double cmax = cv.values.maxCoeff();
                if (cmax == cmin) continue; // degenerate; regenerate

                const TrainResult tr =
                    direct_train(cv, cfg.depth, cfg.offline_budget, cfg.offline_restarts, rng);
                trained.push_back(tr.params);
                refs.push_back(RefProblem{std::move(cv), cmin, cmax});
                break;
            }
        }

        // Mean normalized optimality gap across the whole training set.
        std::vector<std::pair<double, int>> scored(trained.size());
        for (std::size_t t = 0; t < trained.size(); ++t) {
            double acc = 0.0;
            for (const RefProblem& rp : refs) {
                const double f = expectation(rp.cost, trained[t]);
                acc += (f - rp.cmin) / (rp.cmax - rp.cmin + 1e-12);
            }
            scored[t] = {acc / refs.size(), static_cast<int>(t)};
        }
        std::sort(scored.begin(), scored.end());

        std::vector<BankTemplate> keep;
        for (int t = 0; t < cfg.k_temp && t < static_cast<int>(scored.size()); ++t)
            keep.push_back(BankTemplate{trained[scored[t].second], scored[t].first});
        bank.entries[gi] = {rho, std::move(keep)};
    });

    std::sort(bank.entries.begin(), bank.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return bank;
}

void save_bank(const TemplateBank& bank, const std::string& path) {
    json doc;
    doc["version"] = 1;
    doc["depth"] = bank.depth;
    doc["qubits"] = bank.qubits;
    doc["block_size"] = bank.block_size;
    doc["modulation"] = mod_name(bank.mod);
    doc["k_temp"] = bank.k_temp;
    doc["lambda"] = {bank.lambda.lambda_min, bank.lambda.lambda_max, bank.lambda.rho0,
                     bank.lambda.kappa};
    doc["master_seed"] = bank.master_seed;
    doc["n_ref"] = bank.n_ref;
    doc["entries"] = json::array();
    for (const auto& [snr, templates] : bank.entries) {
        json entry;
        entry["snr_db"] = snr;
        entry["templates"] = json::array();
        for (const BankTemplate& t : templates) {
            json jt;
            jt["gammas"] = std::vector<double>(t.params.gammas.data(),
                                               t.params.gammas.data() + t.params.gammas.size());
            jt["betas"] = std::vector<double>(t.params.betas.data(),
                                              t.params.betas.data() + t.params.betas.size());
            jt["score"] = t.score;
            entry["templates"].push_back(std::move(jt));
        }
        doc["entries"].push_back(std::move(entry));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_bank: cannot open " + path);
    out << doc.dump(2) << "\n";
}

TemplateBank load_bank(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_bank: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error("load_bank: malformed JSON: " + std::string(e.what()));
    }

    if (!doc.contains("version") || doc["version"].get<int>() != 1)
        throw std::runtime_error("load_bank: unsupported version");

    TemplateBank bank;
    bank.depth = doc.at("depth").get<int>();
    bank.qubits = doc.at("qubits").get<int>();
    bank.block_size = doc.at("block_size").get<int>();
    bank.mod = mod_from_name(doc.at("modulation").get<std::string>());
    bank.k_temp = doc.at("k_temp").get<int>();
    const auto lam = doc.at("lambda");
    if (!lam.is_array() || lam.size() != 4)
        throw std::runtime_error("load_bank: lambda must have 4 entries");
    bank.lambda = LambdaSchedule{lam[0].get<double>(), lam[1].get<double>(), lam[2].get<double>(),
                                 lam[3].get<double>()};
    bank.master_seed = doc.at("master_seed").get<std::uint64_t>();
    bank.n_ref = doc.at("n_ref").get<int>();

    if (bank.depth < 1 || bank.qubits < 1 || bank.block_size < 1)
        throw std::runtime_error("load_bank: invalid header dimensions");
    if (bank.qubits != bank.block_size * bits_per_symbol(bank.mod))
        throw std::runtime_error("load_bank: qubits inconsistent with block size and modulation");

    for (const auto& entry : doc.at("entries")) {
        std::vector<BankTemplate> templates;
        for (const auto& jt : entry.at("templates")) {
            const auto g = jt.at("gammas").get<std::vector<double>>();
            const auto b = jt.at("betas").get<std::vector<double>>();
            if (static_cast<int>(g.size()) != bank.depth || static_cast<int>(b.size()) != bank.depth)
                throw std::runtime_error("load_bank: parameter dimension mismatches header depth");
            BankTemplate t;
            t.params.gammas = Eigen::Map<const RVec>(g.data(), g.size());
            t.params.betas = Eigen::Map<const RVec>(b.data(), b.size());
            t.score = jt.at("score").get<double>();
            templates.push_back(std::move(t));
        }
        bank.entries.emplace_back(entry.at("snr_db").get<double>(), std::move(templates));
    }
    if (bank.entries.empty()) throw std::runtime_error("load_bank: no entries");
    std::sort(bank.entries.begin(), bank.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return bank;
}

namespace {

std::vector<LocalCandidate> rank_candidates(const BlockProblem& prob,
                                            const std::vector<double>& freq,
                                            const std::vector<std::uint32_t>& seen, int T) {
    std::vector<std::uint32_t> keys = seen;
    std::sort(keys.begin(), keys.end());
    std::vector<LocalCandidate> out;
    out.reserve(keys.size());
    for (std::uint32_t k : keys) {
        LocalCandidate c;
        c.spin_index = k;
        c.symbols = map_block_index(k, prob.symbols(), prob.mod);
        c.exact_metric = block_cost(prob, k);
        c.freq = freq[k];
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const LocalCandidate& a, const LocalCandidate& b) {
        if (a.exact_metric != b.exact_metric) return a.exact_metric < b.exact_metric;
        return a.spin_index < b.spin_index; // lexicographic bit encoding
    });
    if (static_cast<int>(out.size()) > T) out.resize(T);
    return out;
}

} // namespace

std::vector<LocalCandidate> solve_block_transfer(const BlockProblem& prob,
                                                 const TemplateBank& bank, double rho_db, int T,
                                                 int n_shots, RngStream& rng,
                                                 DetectCounters* counters) {
    if (T < 1) throw std::invalid_argument("solve_block_transfer: T must be >= 1");
    if (prob.qubits() != bank.qubits)
        throw std::invalid_argument("solve_block_transfer: bank keyed to a different block width");
    const auto& templates = bank.lookup(rho_db);

    const CostVector cv = build_cost_vector(extract_hubo(prob));
    const std::uint32_t n = 1u << cv.q;
    std::vector<double> freq(n, 0.0);
    std::vector<std::uint32_t> seen;
    for (const BankTemplate& t : templates) {
        const CVec psi = run_ansatz(cv, t.params);
        if (counters) ++counters->qaoa_inferences;
        for (const auto& [k, count] : sample_state(psi, n_shots, rng)) {
            const double f = static_cast<double>(count) / n_shots;
            if (freq[k] == 0.0) seen.push_back(k);
            freq[k] = std::max(freq[k], f);
        }
    }
    return rank_candidates(prob, freq, seen, T);
}

std::vector<LocalCandidate> solve_block_direct(const BlockProblem& prob, int p, int T, int n_shots,
                                               long budget, int restarts, RngStream& rng,
                                               DetectCounters* counters) {
    if (T < 1) throw std::invalid_argument("solve_block_direct: T must be >= 1");
    const CostVector cv = build_cost_vector(extract_hubo(prob));
    const TrainResult tr = direct_train(cv, p, budget, restarts, rng);
    if (counters) counters->optimizer_evals += tr.evals;

    const CVec psi = run_ansatz(cv, tr.params);
    if (counters) ++counters->qaoa_inferences;
    const std::uint32_t n = 1u << cv.q;
    std::vector<double> freq(n, 0.0);
    std::vector<std::uint32_t> seen;
    for (const auto& [k, count] : sample_state(psi, n_shots, rng)) {
        freq[k] = static_cast<double>(count) / n_shots;
        seen.push_back(k);
    }
    return rank_candidates(prob, freq, seen, T);
}

} // namespace bqamd
