#pragma once

#include "bqamd/harness.hpp"
#include "bqamd/transfer.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace bqamd {

// Flat TOML-compatible key/value document: comments, [section] headers
// (flattened into dotted key prefixes), strings, numbers, booleans, and
// one-level arrays of numbers or strings.
struct ConfigValue {
    std::variant<std::string, double, bool, std::vector<double>, std::vector<std::string>> v;

    const std::string& as_string(const std::string& key) const;
    double as_number(const std::string& key) const;
    bool as_bool(const std::string& key) const;
    const std::vector<double>& as_numbers(const std::string& key) const;
    std::vector<std::string> as_strings(const std::string& key) const;
};

using ConfigMap = std::map<std::string, ConfigValue>;

ConfigMap parse_config(const std::string& text);
ConfigMap load_config_file(const std::string& path);

// "a:step:b" (inclusive) or a plain list of dB values.
std::vector<double> parse_snr_spec(const std::string& spec);

SweepConfig sweep_from_config(const ConfigMap& cfg);
BankBuildConfig bank_from_config(const ConfigMap& cfg);

} // namespace bqamd
