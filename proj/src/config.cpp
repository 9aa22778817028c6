#include "bqamd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bqamd {

const std::string& ConfigValue::as_string(const std::string& key) const {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw std::invalid_argument("config: " + key + " must be a string");
}

double ConfigValue::as_number(const std::string& key) const {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    throw std::invalid_argument("config: " + key + " must be a number");
}

bool ConfigValue::as_bool(const std::string& key) const {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    throw std::invalid_argument("config: " + key + " must be a boolean");
}

const std::vector<double>& ConfigValue::as_numbers(const std::string& key) const {
    if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
    throw std::invalid_argument("config: " + key + " must be a number array");
}

std::vector<std::string> ConfigValue::as_strings(const std::string& key) const {
    if (const auto* a = std::get_if<std::vector<std::string>>(&v)) return *a;
    if (const auto* s = std::get_if<std::string>(&v)) return {*s};
    throw std::invalid_argument("config: " + key + " must be a string array");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& tok, int lineno) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (...) {
        throw std::invalid_argument("config: bad number '" + tok + "' at line " +
                                    std::to_string(lineno));
    }
    if (pos != tok.size())
        throw std::invalid_argument("config: bad number '" + tok + "' at line " +
                                    std::to_string(lineno));
    return v;
}

ConfigValue parse_value(const std::string& raw, int lineno) {
    const std::string tok = trim(raw);
    if (tok.empty()) throw std::invalid_argument("config: empty value at line " + std::to_string(lineno));
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw std::invalid_argument("config: unterminated string at line " +
                                        std::to_string(lineno));
        return ConfigValue{tok.substr(1, tok.size() - 2)};
    }
    if (tok == "true") return ConfigValue{true};
    if (tok == "false") return ConfigValue{false};
    if (tok.front() == '[') {
        if (tok.back() != ']')
            throw std::invalid_argument("config: unterminated array at line " +
                                        std::to_string(lineno));
        const std::string body = trim(tok.substr(1, tok.size() - 2));
        std::vector<std::string> items;
        std::string cur;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                items.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) items.push_back(trim(cur));
        if (items.empty()) return ConfigValue{std::vector<double>{}};
        if (items.front().front() == '"') {
            std::vector<std::string> out;
            for (const std::string& it : items) {
                if (it.size() < 2 || it.front() != '"' || it.back() != '"')
                    throw std::invalid_argument("config: bad string array at line " +
                                                std::to_string(lineno));
                out.push_back(it.substr(1, it.size() - 2));
            }
            return ConfigValue{out};
        }
        std::vector<double> out;
        for (const std::string& it : items) out.push_back(parse_number(it, lineno));
        return ConfigValue{out};
    }
    return ConfigValue{parse_number(tok, lineno)};
}

} // namespace

ConfigMap parse_config(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line, prefix;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: bad section at line " +
                                            std::to_string(lineno));
            prefix = trim(line.substr(1, line.size() - 2));
            if (prefix.empty())
                throw std::invalid_argument("config: empty section at line " +
                                            std::to_string(lineno));
            prefix += '.';
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
        cfg[prefix + key] = parse_value(line.substr(eq + 1), lineno);
    }
    return cfg;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<double> parse_snr_spec(const std::string& spec) {
    const std::size_t c1 = spec.find(':');
    if (c1 == std::string::npos) {
        // single value
        return {std::stod(spec)};
    }
    const std::size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("snr spec must be a:step:b");
    const double a = std::stod(spec.substr(0, c1));
    const double step = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double b = std::stod(spec.substr(c2 + 1));
    if (step <= 0.0) throw std::invalid_argument("snr spec step must be positive");
    std::vector<double> grid;
    for (double v = a; v <= b + 1e-9; v += step) grid.push_back(v);
    if (grid.empty()) throw std::invalid_argument("snr spec yields an empty grid");
    return grid;
}

namespace {

template <typename T>
T get_int(const ConfigMap& cfg, const std::string& key, T fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    const double v = it->second.as_number(key);
    if (v != std::floor(v)) throw std::invalid_argument("config: " + key + " must be an integer");
    return static_cast<T>(v);
}

std::string get_str(const ConfigMap& cfg, const std::string& key, const std::string& fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    return it->second.as_string(key);
}

LambdaSchedule lambda_from(const ConfigMap& cfg, const std::string& key) {
    LambdaSchedule sched;
    const auto it = cfg.find(key);
    if (it == cfg.end()) return sched;
    const auto& v = it->second.as_numbers(key);
    if (v.size() != 4)
        throw std::invalid_argument("config: " + key + " must be [min, max, rho0, kappa]");
    return LambdaSchedule{v[0], v[1], v[2], v[3]};
}

std::vector<double> snr_from(const ConfigMap& cfg) {
    const auto it = cfg.find("snr");
    if (it == cfg.end()) return SweepConfig::table1().snr_grid;
    if (const auto* s = std::get_if<std::string>(&it->second.v)) return parse_snr_spec(*s);
    return it->second.as_numbers("snr");
}

} // namespace

SweepConfig sweep_from_config(const ConfigMap& cfg) {
    SweepConfig sw = SweepConfig::table1();
    sw.nt = get_int(cfg, "nt", sw.nt);
    sw.nr = get_int(cfg, "nr", sw.nr);
    sw.mod = mod_from_name(get_str(cfg, "modulation", mod_name(sw.mod)));
    sw.snr_grid = snr_from(cfg);
    sw.trials = get_int(cfg, "trials", sw.trials);
    sw.master_seed = get_int<std::uint64_t>(cfg, "master_seed", sw.master_seed);
    if (const auto it = cfg.find("detectors"); it != cfg.end())
        sw.detectors = it->second.as_strings("detectors");
    sw.bank_path = get_str(cfg, "bank", "");
    sw.threads = get_int(cfg, "threads", 0);
    sw.audit_trials = get_int(cfg, "audit_trials", 0);

    sw.block_cfg.b = get_int(cfg, "detector.block_size", sw.block_cfg.b);
    sw.block_cfg.p = get_int(cfg, "detector.depth", sw.block_cfg.p);
    sw.block_cfg.T = get_int(cfg, "detector.local_list", sw.block_cfg.T);
    sw.block_cfg.K = get_int(cfg, "detector.kbest_width", sw.block_cfg.K);
    sw.block_cfg.n_shots = get_int(cfg, "detector.shots", sw.block_cfg.n_shots);
    sw.block_cfg.lambda = lambda_from(cfg, "detector.lambda");
    sw.block_cfg.online_budget = get_int<long>(cfg, "detector.online_budget", 150);
    sw.block_cfg.online_restarts = get_int(cfg, "detector.online_restarts", 4);
    sw.classical_k = get_int(cfg, "detector.classical_k", sw.classical_k);

    for (const std::string& name : known_detectors()) {
        const std::string key = "detector." + name + ".snr_points";
        if (const auto it = cfg.find(key); it != cfg.end())
            sw.snr_mask[name] = it->second.as_numbers(key);
    }
    return sw;
}

BankBuildConfig bank_from_config(const ConfigMap& cfg) {
    const SweepConfig sw = sweep_from_config(cfg);
    BankBuildConfig bc;
    bc.nt = sw.nt;
    bc.nr = sw.nr;
    bc.mod = sw.mod;
    bc.block_size = sw.block_cfg.b;
    bc.depth = sw.block_cfg.p;
    bc.snr_grid = sw.snr_grid;
    bc.lambda = sw.block_cfg.lambda;
    bc.master_seed = sw.master_seed;
    bc.threads = sw.threads;
    bc.n_ref = get_int(cfg, "bank_build.n_ref", 32);
    bc.k_temp = get_int(cfg, "bank_build.k_temp", 4);
    bc.offline_budget = get_int<long>(cfg, "bank_build.offline_budget", 500);
    bc.offline_restarts = get_int(cfg, "bank_build.offline_restarts", 8);
    return bc;
}

} // namespace bqamd
