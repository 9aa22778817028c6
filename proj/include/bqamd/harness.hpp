#pragma once

#include "bqamd/baselines.hpp"
#include "bqamd/detector.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bqamd {

// Known detector names:
//   mf, mmse, kbest, block-exh-reg, block-exh-unreg, qaoa-direct,
//   qaoa-transfer
bool is_block_detector(const std::string& name);
const std::vector<std::string>& known_detectors();

struct SweepConfig {
    int nt = 16;
    int nr = 16;
    ModId mod = ModId::QAM16;
    std::vector<double> snr_grid;
    int trials = 100;
    std::uint64_t master_seed = 1;
    std::vector<std::string> detectors;
    // Optional per-detector SNR restriction (dB values); empty = full grid.
    std::map<std::string, std::vector<double>> snr_mask;
    DetectorConfig block_cfg; // shared by the blockwise variants
    int classical_k = 4;
    std::string bank_path;
    int threads = 0;      // 0 = hardware default, capped by BQAMD_THREADS
    int audit_trials = 0; // store decisions for the first N trials per SNR

    static SweepConfig table1();
    void validate() const;
};

struct BerRecord {
    std::string detector;
    double snr_db = 0.0;
    long trials = 0;
    long bit_errors = 0;
    long total_bits = 0;
    double ber = 0.0;
    double plot_floor = 0.0; // 1 / total_bits (single-error floor)
    double mean_final_ped = 0.0;
    double local_calls_mean = 0.0;
    DetectCounters counters; // aggregate, not serialized
};

struct TrialAudit {
    int snr_index = 0;
    int trial = 0;
    std::vector<std::uint8_t> tx_bits;
    std::map<std::string, std::vector<std::uint8_t>> decided_bits;
};

struct SweepResult {
    std::vector<BerRecord> records;           // detector-major, snr ascending
    std::vector<std::uint64_t> instance_digests; // per snr_index*trials + trial
    std::vector<TrialAudit> audits;
};

SweepResult run_sweep(const SweepConfig& cfg, const TemplateBank* bank = nullptr);

// Bits of a decided symbol vector in original antenna order.
std::vector<std::uint8_t> decide_bits(const CVec& x_hat, ModId mod);

std::string render_csv(const std::vector<BerRecord>& records);
void write_csv(const std::string& path, const std::vector<BerRecord>& records);

struct Summary {
    std::vector<std::string> detectors;
    std::map<std::string, double> mean_ber; // unweighted over the grid
    // per-SNR BER table: ber[detector][snr index]
    std::map<std::string, std::vector<double>> ber;
    std::vector<double> snr_grid;
};

// Per-detector unweighted mean BER across a full grid; throws when a
// detector's records do not cover every grid point.
Summary summarize(const std::vector<BerRecord>& records, const std::vector<double>& grid);

std::string render_summary(const Summary& summary);

} // namespace bqamd
