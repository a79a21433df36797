// config.hpp: Experiment configuration: parsing, schema and validation
//
// A configuration is a flat map from "section.key" to a JSON value. It can be
// read from a key-value text file with [section] headers or from a (possibly
// nested) JSON object. Every key must appear in the schema and apply to the
// selected experiment.

#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dissichain/chain.hpp"

namespace dissichain::runner {

inline const std::vector<std::string> kExperiments{"single", "multi",        "oracle-check", "adiabatic",
                                                   "join",   "decay-ladder", "thermo",       "cloud"};

// Malformed configuration text.
class ConfigSyntaxError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ValueType { integer, real, boolean, string, int_list, real_list };

struct KeySpec {
    std::string key;
    ValueType type;
    nlohmann::json default_value;     // null for required keys
    std::vector<std::string> scope;   // experiments it applies to; empty means all
    std::string help;
};

const std::vector<KeySpec>& schema();
const KeySpec* find_key(std::string_view key);

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity;
    std::string key;
    std::string message;
};

std::string to_string(const Diagnostic& d);

class ExperimentConfig {
public:
    ExperimentConfig() = default;

    static ExperimentConfig from_text(std::string_view text);
    static ExperimentConfig from_json(const nlohmann::json& j);
    // ".json" files are parsed as JSON, anything else as key-value text.
    // Throws IoError if unreadable, ConfigSyntaxError if malformed.
    static ExperimentConfig load(const std::filesystem::path& path);

    void set(const std::string& key, nlohmann::json value);
    // Parses `text` with the same rules as a value in the text format.
    void set_text(const std::string& key, std::string_view text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, nlohmann::json>& values() const { return values_; }

    std::string experiment() const;

    // Explicit value or schema default. Throws std::out_of_range for an
    // unknown key and std::invalid_argument if neither exists.
    const nlohmann::json& value(const std::string& key) const;
    template <class T>
    T get(const std::string& key) const
    {
        return value(key).get<T>();
    }

    // Every key applying to the experiment, defaults filled in.
    nlohmann::json resolved() const;

private:
    std::map<std::string, nlohmann::json> values_;
};

// All violations; empty means valid. Never throws for a malformed config.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

// chain.* keys of a config. Does not validate.
ChainSpec chain_from_config(const ExperimentConfig& config);

// initial.* keys; site 0 selects the site that centres the excitation
// profile on the chain. Does not validate.
InitialStateSpec initial_from_config(const ExperimentConfig& config, const ChainSpec& chain);

// multi.m, or oracle.m for the oracle-check experiment.
int excitation_count(const ExperimentConfig& config);

// multi.sites, or m consecutive sites around the chain centre when empty.
std::vector<int> multi_sites_from_config(const ExperimentConfig& config, int n_sites);

// True if any diagnostic is an error, or any is a warning and strict is set.
bool rejects(const std::vector<Diagnostic>& diagnostics, bool strict);

} // namespace dissichain::runner
