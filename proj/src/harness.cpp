#include "bqamd/harness.hpp"

#include "bqamd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bqamd {

const std::vector<std::string>& known_detectors() {
    static const std::vector<std::string> names = {
        "mf",           "mmse",           "kbest",       "block-exh-reg",
        "block-exh-unreg", "qaoa-direct", "qaoa-transfer"};
    return names;
}

bool is_block_detector(const std::string& name) {
    return name == "block-exh-reg" || name == "block-exh-unreg" || name == "qaoa-direct" ||
           name == "qaoa-transfer";
}

SweepConfig SweepConfig::table1() {
    SweepConfig cfg;
    cfg.nt = 16;
    cfg.nr = 16;
    cfg.mod = ModId::QAM16;
    for (int s = 0; s <= 30; s += 2) cfg.snr_grid.push_back(s);
    cfg.trials = 100;
    cfg.master_seed = 1;
    cfg.detectors = known_detectors();
    cfg.block_cfg = DetectorConfig{};
    cfg.classical_k = 4;
    return cfg;
}

void SweepConfig::validate() const {
    if (nt < 1 || nr < 1) throw std::invalid_argument("sweep: dimensions must be positive");
    if (snr_grid.empty()) throw std::invalid_argument("sweep: empty SNR grid");
    if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    if (detectors.empty()) throw std::invalid_argument("sweep: no detectors selected");
    for (const std::string& d : detectors) {
        if (std::find(known_detectors().begin(), known_detectors().end(), d) ==
            known_detectors().end())
            throw std::invalid_argument("sweep: unknown detector " + d);
    }
    if (classical_k < 1) throw std::invalid_argument("sweep: classical_k must be >= 1");
}

std::vector<std::uint8_t> decide_bits(const CVec& x_hat, ModId mod) {
    const int m = bits_per_symbol(mod);
    std::vector<std::uint8_t> bits(x_hat.size() * m);
    for (Eigen::Index i = 0; i < x_hat.size(); ++i) {
        const std::uint32_t label = slice_label(x_hat(i), mod);
        for (int j = 0; j < m; ++j) bits[i * m + j] = static_cast<std::uint8_t>((label >> j) & 1u);
    }
    return bits;
}

namespace {

DetectorConfig detector_config_for(const SweepConfig& cfg, const std::string& name) {
    DetectorConfig dc = cfg.block_cfg;
    if (name == "block-exh-reg") {
        dc.mode = SolverMode::Exhaustive;
        dc.regularize = true;
    } else if (name == "block-exh-unreg") {
        dc.mode = SolverMode::Exhaustive;
        dc.regularize = false;
    } else if (name == "qaoa-direct") {
        dc.mode = SolverMode::Direct;
        dc.regularize = true;
    } else if (name == "qaoa-transfer") {
        dc.mode = SolverMode::Transfer;
        dc.regularize = true;
    }
    return dc;
}

bool detector_active_at(const SweepConfig& cfg, const std::string& name, double snr_db) {
    const auto it = cfg.snr_mask.find(name);
    if (it == cfg.snr_mask.end() || it->second.empty()) return true;
    for (double v : it->second)
        if (v == snr_db) return true;
    return false;
}

struct TrialCell {
    long bit_errors = 0;
    double final_ped = 0.0;
    DetectCounters counters;
    bool active = false;
    std::vector<std::uint8_t> decided; // audit only
};

} // namespace

SweepResult run_sweep(const SweepConfig& cfg, const TemplateBank* bank) {
    cfg.validate();
    const bool wants_transfer = std::find(cfg.detectors.begin(), cfg.detectors.end(),
                                          std::string("qaoa-transfer")) != cfg.detectors.end();
    if (wants_transfer && bank == nullptr)
        throw std::invalid_argument("sweep: transfer detector selected without a bank");

    const int m = bits_per_symbol(cfg.mod);
    const int n_snr = static_cast<int>(cfg.snr_grid.size());
    const int n_det = static_cast<int>(cfg.detectors.size());
    const int n_tasks = n_snr * cfg.trials;

    std::vector<std::vector<TrialCell>> cells(n_tasks,
                                              std::vector<TrialCell>(n_det));
    std::vector<std::uint64_t> digests(n_tasks, 0);
    std::vector<TrialAudit> audits;
    const int audit_per_snr = std::min(cfg.audit_trials, cfg.trials);
    audits.resize(static_cast<std::size_t>(audit_per_snr) * n_snr);

    parallel_for(n_tasks, cfg.threads, [&](int task) {
        const int si = task / cfg.trials;
        const int trial = task % cfg.trials;
        const double snr = cfg.snr_grid[si];

        RngStream inst_rng = RngStream::substream(cfg.master_seed, si, trial);
        const DetectionInstance inst = generate_instance(cfg.nt, cfg.nr, cfg.mod, snr, inst_rng);
        digests[task] = inst.digest();

        TrialAudit* audit = nullptr;
        if (trial < audit_per_snr) {
            audit = &audits[static_cast<std::size_t>(si) * audit_per_snr + trial];
            audit->snr_index = si;
            audit->trial = trial;
            audit->tx_bits = inst.tx_bits;
        }

        for (int di = 0; di < n_det; ++di) {
            const std::string& name = cfg.detectors[di];
            if (!detector_active_at(cfg, name, snr)) continue;
            TrialCell& cell = cells[task][di];
            cell.active = true;

            CVec x_hat;
            if (name == "mf") {
                x_hat = detect_mf(inst);
            } else if (name == "mmse") {
                x_hat = detect_mmse(inst);
            } else if (name == "kbest") {
                x_hat = detect_kbest_classical(inst, cfg.classical_k).x_hat;
            } else {
                const DetectorConfig dc = detector_config_for(cfg, name);
                RngStream det_rng =
                    RngStream::substream(cfg.master_seed ^ fnv1a_str(name), si, trial);
                const DetectResult res =
                    detect(inst, dc, dc.mode == SolverMode::Transfer ? bank : nullptr, det_rng);
                x_hat = res.x_hat;
                cell.counters = res.counters;
            }
            cell.final_ped = (inst.y - inst.H * x_hat).squaredNorm();

            const std::vector<std::uint8_t> bits = decide_bits(x_hat, cfg.mod);
            long errors = 0;
            for (std::size_t i = 0; i < bits.size(); ++i)
                if (bits[i] != inst.tx_bits[i]) ++errors;
            cell.bit_errors = errors;
            if (audit) audit->decided_bits[name] = bits;
        }
    });

    SweepResult result;
    result.instance_digests = std::move(digests);
    result.audits = std::move(audits);

    for (int di = 0; di < n_det; ++di) {
        for (int si = 0; si < n_snr; ++si) {
            if (!detector_active_at(cfg, cfg.detectors[di], cfg.snr_grid[si])) continue;
            BerRecord rec;
            rec.detector = cfg.detectors[di];
            rec.snr_db = cfg.snr_grid[si];
            rec.trials = cfg.trials;
            double ped_sum = 0.0;
            for (int trial = 0; trial < cfg.trials; ++trial) {
                const TrialCell& cell = cells[si * cfg.trials + trial][di];
                rec.bit_errors += cell.bit_errors;
                ped_sum += cell.final_ped;
                rec.counters += cell.counters;
            }
            rec.total_bits = static_cast<long>(cfg.trials) * cfg.nt * m;
            rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.total_bits);
            rec.plot_floor = 1.0 / static_cast<double>(rec.total_bits);
            rec.mean_final_ped = ped_sum / cfg.trials;
            rec.local_calls_mean = static_cast<double>(rec.counters.local_calls) / cfg.trials;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string render_csv(const std::vector<BerRecord>& records) {
    std::string out =
        "detector,snr_db,trials,bit_errors,total_bits,ber,plot_floor,mean_final_ped,"
        "local_calls_mean\n";
    for (const BerRecord& r : records) {
        out += r.detector;
        out += ',';
        out += fmt_double(r.snr_db);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += std::to_string(r.bit_errors);
        out += ',';
        out += std::to_string(r.total_bits);
        out += ',';
        out += fmt_double(r.ber);
        out += ',';
        out += fmt_double(r.plot_floor);
        out += ',';
        out += fmt_double(r.mean_final_ped);
        out += ',';
        out += fmt_double(r.local_calls_mean);
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<BerRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << render_csv(records);
}

Summary summarize(const std::vector<BerRecord>& records, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("summarize: empty grid");
    Summary s;
    s.snr_grid = grid;
    for (const BerRecord& r : records) {
        if (std::find(s.detectors.begin(), s.detectors.end(), r.detector) == s.detectors.end()) {
            s.detectors.push_back(r.detector);
            s.ber[r.detector].assign(grid.size(), std::nan(""));
        }
    }
    for (const BerRecord& r : records) {
        const auto it = std::find(grid.begin(), grid.end(), r.snr_db);
        if (it == grid.end()) throw std::invalid_argument("summarize: record off the grid");
        s.ber[r.detector][it - grid.begin()] = r.ber;
    }
    for (const std::string& d : s.detectors) {
        double acc = 0.0;
        for (double v : s.ber[d]) {
            if (std::isnan(v)) throw std::invalid_argument("summarize: incomplete grid for " + d);
            acc += v;
        }
        s.mean_ber[d] = acc / static_cast<double>(grid.size());
    }
    return s;
}

std::string render_summary(const Summary& summary) {
    std::string out = "detector";
    for (double snr : summary.snr_grid) out += "," + fmt_double(snr);
    out += ",mean\n";
    for (const std::string& d : summary.detectors) {
        out += d;
        for (double v : summary.ber.at(d)) out += "," + fmt_double(v);
        out += "," + fmt_double(summary.mean_ber.at(d));
        out += "\n";
    }
    return out;
}

} // namespace bqamd
