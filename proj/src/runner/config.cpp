// config.cpp: Configuration parsing and validation

#include "dissichain/runner/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dissichain/analysis.hpp"
#include "dissichain/errors.hpp"
#include "dissichain/lindblad_oracle.hpp"

namespace dissichain::runner {

using nlohmann::json;

namespace {

const std::vector<std::string> kTimed{"single", "multi", "oracle-check", "thermo"};
const std::vector<std::string> kChainSized{"single", "multi", "oracle-check", "thermo"};
const std::vector<std::string> kRated{"single", "multi", "oracle-check", "thermo", "join", "decay-ladder"};
const std::vector<std::string> kInitial{"single", "oracle-check", "thermo"};
const std::vector<std::string> kMulti{"multi", "oracle-check"};

std::vector<KeySpec> build_schema()
{
    using V = ValueType;
    return {
        {"experiment", V::string, json(), {}, "experiment to run"},
        {"seed", V::integer, 20240601, {}, "seed for randomized draws"},
        {"output.dir", V::string, "", {}, "output subdirectory; defaults to the experiment name"},

        {"chain.n_sites", V::integer, 51, kChainSized, "number of sites"},
        {"chain.gamma", V::real, 1.0, kRated, "reservoir rate"},
        {"chain.lattice_a", V::real, 1.0, kChainSized, "lattice constant"},

        {"initial.kind", V::string, "single_site", kInitial,
         "single_site | entangled_pair | binomial | custom | stationary_mixture"},
        {"initial.site", V::integer, 0, kInitial, "first excited site, 0 centres the profile"},
        {"initial.sign", V::string, "-", kInitial, "relative sign of an entangled pair"},
        {"initial.m", V::integer, 0, kInitial, "binomial order"},
        {"initial.W", V::real, 1.0, kInitial, "W of the stationary mixture"},
        {"initial.amplitudes", V::real_list, json::array(), kInitial, "real site amplitudes of a custom state"},

        {"time.t_end", V::real, 9.0, kTimed, "final time"},
        {"time.dt", V::real, 0.01, kTimed, "integration step"},
        {"time.samples", V::real_list, json::array(), kTimed, "explicit sample times"},
        {"time.n_samples", V::integer, 90, kTimed, "uniform samples in (0, t_end] when time.samples is empty"},

        {"single.method", V::string, "rk4", {"single"}, "rk4 | spectral"},
        {"single.matrix_times", V::real_list, json::array(), {"single"},
         "times at which the full rho_kl is written; empty means t_end"},

        {"multi.m", V::integer, 2, {"multi"}, "number of excitations"},
        {"multi.sites", V::int_list, json::array(), kMulti, "initially excited sites"},
        {"multi.dump_generator", V::boolean, false, {"multi"}, "write the sparse generator"},

        {"oracle.m", V::integer, 1, {"oracle-check"}, "number of excitations compared"},
        {"oracle.draws", V::integer, 0, {"oracle-check"}, "random pure single-excitation states; 0 uses initial.*"},
        {"oracle.tolerance", V::real, 1e-6, {"oracle-check"}, "allowed sup-norm deviation"},

        {"adiabatic.n_chain", V::integer, 2, {"adiabatic"}, "chain sites of the reduced model"},
        {"adiabatic.g", V::real, 1.0, {"adiabatic"}, "coherent coupling"},
        {"adiabatic.ratios", V::real_list, json::array({20.0, 50.0, 100.0}), {"adiabatic"}, "values of Gamma/g"},
        {"adiabatic.horizon", V::real, 3.0, {"adiabatic"}, "final gamma_eff * t"},
        {"adiabatic.samples", V::integer, 60, {"adiabatic"}, "comparison times"},

        {"join.n_a", V::integer, 100, {"join"}, "sites of chain A"},
        {"join.n_b", V::integer, 100, {"join"}, "sites of chain B"},
        {"join.W_a", V::real, 1.0, {"join"}, "W of chain A"},
        {"join.W_b", V::real, 1.0, {"join"}, "W of chain B"},
        {"join.t_relax", V::real, 0.0, {"join"}, "relaxation time, 0 chooses automatically"},

        {"ladder.m", V::int_list, json::array({0, 1, 2, 3}), {"decay-ladder"}, "binomial orders"},
        {"ladder.n_sites", V::integer, 401, {"decay-ladder"}, "chain length"},
        {"ladder.window", V::real_list, json::array(), {"decay-ladder"}, "[t_min, t_max]; empty uses the default"},
        {"ladder.n_points", V::integer, 80, {"decay-ladder"}, "log-spaced samples in the window"},

        {"cloud.n_per_side", V::integer, 3, {"cloud"}, "atoms per side of the cubic grid"},
        {"cloud.spacing", V::real, 0.5, {"cloud"}, "grid spacing"},
        {"cloud.k0", V::real, 1.0, {"cloud"}, "wavenumber"},
        {"cloud.gamma", V::real, 1.0, {"cloud"}, "single-atom rate"},
        {"cloud.rwa", V::boolean, true, {"cloud"}, "use the rotating-wave kernel"},
        {"cloud.atom", V::integer, 0, {"cloud"}, "initially excited atom, 0 is the central one"},
        {"cloud.t_end", V::real, 10.0, {"cloud"}, "final time"},
        {"cloud.dt", V::real, 0.0, {"cloud"}, "integration step, 0 selects 0.05 / rate bound"},
        {"cloud.record_every", V::integer, 10, {"cloud"}, "steps between recorded samples"},
        {"cloud.window", V::real_list, json::array(), {"cloud"}, "fit window; empty means [1, t_end]"},
    };
}

bool applies(const KeySpec& spec, const std::string& experiment)
{
    return spec.scope.empty() || std::find(spec.scope.begin(), spec.scope.end(), experiment) != spec.scope.end();
}

bool is_integral(const json& v)
{
    if (v.is_number_integer()) return true;
    if (!v.is_number_float()) return false;
    const double d = v.get<double>();
    return std::isfinite(d) && d == std::floor(d);
}

bool type_matches(const json& v, ValueType type)
{
    switch (type) {
    case ValueType::integer: return is_integral(v);
    case ValueType::real: return v.is_number();
    case ValueType::boolean: return v.is_boolean();
    case ValueType::string: return v.is_string();
    case ValueType::int_list: return v.is_array() && std::all_of(v.begin(), v.end(), is_integral);
    case ValueType::real_list:
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
    }
    return false;
}

const char* type_name(ValueType type)
{
    switch (type) {
    case ValueType::integer: return "an integer";
    case ValueType::real: return "a number";
    case ValueType::boolean: return "true or false";
    case ValueType::string: return "a string";
    case ValueType::int_list: return "a list of integers";
    case ValueType::real_list: return "a list of numbers";
    }
    return "?";
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

json parse_scalar(const std::string& text)
{
    if (text == "true") return true;
    if (text == "false") return false;
    if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') && text.back() == text.front()) {
        return text.substr(1, text.size() - 2);
    }
    const bool intlike = text.find_first_of(".eE") == std::string::npos && text.find("inf") == std::string::npos &&
                         text.find("nan") == std::string::npos;
    try {
        std::size_t used = 0;
        if (intlike) {
            const long long v = std::stoll(text, &used);
            if (used == text.size()) return v;
        } else {
            const double v = std::stod(text, &used);
            if (used == text.size()) return v;
        }
    } catch (const std::exception&) {
    }
    return text;
}

json parse_value(std::string_view raw)
{
    std::string text = trim(raw);
    const bool bracketed = text.size() >= 2 && text.front() == '[' && text.back() == ']';
    if (bracketed || text.find(',') != std::string::npos) {
        if (bracketed) text = text.substr(1, text.size() - 2);
        json list = json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) continue;
            list.push_back(parse_scalar(t));
        }
        return list;
    }
    return parse_scalar(text);
}

// A scalar given for a list-typed key is a one-element list.
json normalize(const std::string& key, json v)
{
    const KeySpec* spec = find_key(key);
    const bool list = spec && (spec->type == ValueType::int_list || spec->type == ValueType::real_list);
    if (list && v.is_number()) return json::array({v});
    return v;
}

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out)
{
    for (const auto& [k, v] : j.items()) {
        const std::string key = prefix.empty() ? k : prefix + "." + k;
        if (v.is_object()) {
            flatten(v, key, out);
        } else {
            out[key] = normalize(key, v);
        }
    }
}

} // namespace

const std::vector<KeySpec>& schema()
{
    static const std::vector<KeySpec> table = build_schema();
    return table;
}

const KeySpec* find_key(std::string_view key)
{
    for (const auto& spec : schema()) {
        if (spec.key == key) return &spec;
    }
    return nullptr;
}

std::string to_string(const Diagnostic& d)
{
    std::string out = d.severity == Severity::error ? "error" : "warning";
    if (!d.key.empty()) out += " [" + d.key + "]";
    return out + ": " + d.message;
}

ExperimentConfig ExperimentConfig::from_text(std::string_view text)
{
    ExperimentConfig cfg;
    std::string section;
    std::stringstream ss{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigSyntaxError("line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigSyntaxError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigSyntaxError("line " + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        cfg.values_[full] = normalize(full, parse_value(std::string_view(t).substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json(const json& j)
{
    if (!j.is_object()) throw ConfigSyntaxError("configuration JSON must be an object");
    ExperimentConfig cfg;
    flatten(j, "", cfg.values_);
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read configuration " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.extension() == ".json") {
        try {
            return from_json(json::parse(buf.str()));
        } catch (const json::parse_error& e) {
            throw ConfigSyntaxError(path.string() + ": " + e.what());
        }
    }
    return from_text(buf.str());
}

void ExperimentConfig::set(const std::string& key, json value) { values_[key] = normalize(key, std::move(value)); }

void ExperimentConfig::set_text(const std::string& key, std::string_view text)
{
    values_[key] = normalize(key, parse_value(text));
}

std::string ExperimentConfig::experiment() const
{
    const auto it = values_.find("experiment");
    if (it == values_.end() || !it->second.is_string()) return {};
    return it->second.get<std::string>();
}

const json& ExperimentConfig::value(const std::string& key) const
{
    const KeySpec* spec = find_key(key);
    if (!spec) throw std::out_of_range("unknown configuration key " + key);
    const auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    if (spec->default_value.is_null()) throw std::invalid_argument("missing required field '" + key + "'");
    return spec->default_value;
}

json ExperimentConfig::resolved() const
{
    json out = json::object();
    const std::string exp = experiment();
    for (const auto& spec : schema()) {
        if (!applies(spec, exp)) continue;
        const auto it = values_.find(spec.key);
        out[spec.key] = it != values_.end() ? it->second : spec.default_value;
    }
    return out;
}

ChainSpec chain_from_config(const ExperimentConfig& config)
{
    return ChainSpec{config.get<int>("chain.n_sites"), config.get<double>("chain.gamma"),
                     config.get<double>("chain.lattice_a")};
}

InitialStateSpec initial_from_config(const ExperimentConfig& config, const ChainSpec& chain)
{
    const std::string kind = config.get<std::string>("initial.kind");
    const int n = chain.n_sites;
    int site = config.get<int>("initial.site");
    const auto centred = [&](int span) { return site != 0 ? site : (n + 1) / 2 - span / 2; };
    if (kind == "single_site") return init::SingleSite{centred(0)};
    if (kind == "entangled_pair") {
        const std::string sign = config.get<std::string>("initial.sign");
        if (sign != "+" && sign != "-") throw std::invalid_argument("initial.sign must be + or -");
        return init::EntangledPair{centred(1), sign == "+" ? +1 : -1};
    }
    if (kind == "binomial") {
        const int m = config.get<int>("initial.m");
        return init::Binomial{centred(m), m};
    }
    if (kind == "custom") {
        init::Custom c;
        for (double a : config.get<std::vector<double>>("initial.amplitudes")) c.amplitudes.emplace_back(a, 0.0);
        return c;
    }
    if (kind == "stationary_mixture") return init::StationaryMixture{config.get<double>("initial.W")};
    throw std::invalid_argument("unknown initial.kind '" + kind + "'");
}

int excitation_count(const ExperimentConfig& config)
{
    return config.experiment() == "oracle-check" ? config.get<int>("oracle.m") : config.get<int>("multi.m");
}

std::vector<int> multi_sites_from_config(const ExperimentConfig& config, int n_sites)
{
    auto sites = config.get<std::vector<int>>("multi.sites");
    if (!sites.empty()) return sites;
    const int m = excitation_count(config);
    const int first = std::max(1, (n_sites + 1) / 2 - m / 2);
    for (int i = 0; i < m; ++i) sites.push_back(first + i);
    return sites;
}

namespace {

class Checker {
public:
    explicit Checker(const ExperimentConfig& c) : cfg(c) {}

    void error(const std::string& key, const std::string& msg) { out.push_back({Severity::error, key, msg}); }
    void warning(const std::string& key, const std::string& msg) { out.push_back({Severity::warning, key, msg}); }

    template <class T>
    T get(const std::string& key) const
    {
        return cfg.get<T>(key);
    }

    void positive(const std::string& key)
    {
        if (!(get<double>(key) > 0.0)) error(key, "must be > 0");
    }
    void at_least(const std::string& key, long lo)
    {
        if (get<long>(key) < lo) error(key, "must be >= " + std::to_string(lo));
    }

    const ExperimentConfig& cfg;
    std::vector<Diagnostic> out;
};

void check_chain(Checker& c, bool sized)
{
    if (sized) {
        c.at_least("chain.n_sites", 2);
        c.positive("chain.lattice_a");
    }
    c.positive("chain.gamma");
}

void check_initial(Checker& c)
{
    const std::string kind = c.get<std::string>("initial.kind");
    static const std::set<std::string> kinds{"single_site", "entangled_pair", "binomial", "custom",
                                             "stationary_mixture"};
    if (!kinds.count(kind)) {
        c.error("initial.kind", "unknown kind '" + kind + "'");
        return;
    }
    try {
        const ChainSpec chain = chain_from_config(c.cfg);
        validate_initial(chain, initial_from_config(c.cfg, chain));
    } catch (const std::exception& e) {
        c.error("initial." + std::string(kind == "custom" ? "amplitudes" : "kind"), e.what());
    }
}

void check_time(Checker& c)
{
    if (c.get<double>("time.t_end") < 0.0) c.error("time.t_end", "must be >= 0");
    c.positive("time.dt");
    c.at_least("time.n_samples", 1);
    const auto samples = c.get<std::vector<double>>("time.samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] < 0.0 || (i > 0 && samples[i] < samples[i - 1])) {
            c.error("time.samples", "must be non-negative and non-decreasing");
            break;
        }
    }
}

void check_multi(Checker& c)
{
    const int n = c.get<int>("chain.n_sites");
    const int m = excitation_count(c.cfg);
    if (m < 1 || m > n) {
        c.error(c.cfg.experiment() == "oracle-check" ? "oracle.m" : "multi.m", "must lie in [1, chain.n_sites]");
        return;
    }
    const auto sites = multi_sites_from_config(c.cfg, n);
    std::set<int> distinct(sites.begin(), sites.end());
    if (static_cast<int>(sites.size()) != m || static_cast<int>(distinct.size()) != m) {
        c.error("multi.sites", "must list m distinct sites");
    } else if (*distinct.begin() < 1 || *distinct.rbegin() > n) {
        c.error("multi.sites", "sites must lie in [1, chain.n_sites]");
    }
}

void check_experiment(Checker& c, const std::string& exp)
{
    if (exp == "single" || exp == "thermo" || exp == "multi" || exp == "oracle-check") {
        check_chain(c, true);
        check_time(c);
    }
    if (exp == "single" || exp == "thermo") check_initial(c);
    if (exp == "single") {
        const auto method = c.get<std::string>("single.method");
        if (method != "rk4" && method != "spectral") c.error("single.method", "must be rk4 or spectral");
        for (double t : c.get<std::vector<double>>("single.matrix_times")) {
            if (t < 0.0) c.error("single.matrix_times", "times must be >= 0");
        }
    }
    if (exp == "multi") check_multi(c);
    if (exp == "oracle-check") {
        if (c.get<int>("chain.n_sites") > oracle::kMaxChainSites) {
            c.error("chain.n_sites", "oracle limited to " + std::to_string(oracle::kMaxChainSites) + " sites");
            return;
        }
        c.at_least("oracle.draws", 0);
        c.positive("oracle.tolerance");
        if (c.get<int>("oracle.m") != 1) {
            check_multi(c);
        } else if (c.get<int>("oracle.draws") == 0) {
            check_initial(c);
        }
    }
    if (exp == "adiabatic") {
        const int n_chain = c.get<int>("adiabatic.n_chain");
        if (n_chain < 2) {
            c.error("adiabatic.n_chain", "must be >= 2");
        } else if (2 * n_chain - 1 > oracle::kMaxBipartiteSites) {
            c.error("adiabatic.n_chain",
                    "oracle limited to " + std::to_string(oracle::kMaxBipartiteSites) + " sites including lossy ones");
        }
        c.positive("adiabatic.g");
        c.positive("adiabatic.horizon");
        c.at_least("adiabatic.samples", 1);
        const auto ratios = c.get<std::vector<double>>("adiabatic.ratios");
        if (ratios.empty()) c.error("adiabatic.ratios", "must not be empty");
        for (double r : ratios) {
            if (!(r > 0.0)) {
                c.error("adiabatic.ratios", "ratios must be > 0");
            } else if (r < 20.0) {
                std::ostringstream msg;
                msg << "Gamma/g = " << r << " is below 20, outside the adiabatic regime";
                c.warning("adiabatic.ratios", msg.str());
            }
        }
    }
    if (exp == "join") {
        check_chain(c, false);
        c.at_least("join.n_a", 2);
        c.at_least("join.n_b", 2);
        for (const char* side : {"a", "b"}) {
            const std::string wkey = std::string("join.W_") + side;
            const double W = c.get<double>(wkey);
            const int n = c.get<int>(std::string("join.n_") + side);
            if (W < 0.0 || W > n) c.error(wkey, "must lie in [0, n_sites of that chain]");
        }
        if (c.get<double>("join.t_relax") < 0.0) c.error("join.t_relax", "must be >= 0");
    }
    if (exp == "decay-ladder") {
        check_chain(c, false);
        const int n = c.get<int>("ladder.n_sites");
        if (n < 2) c.error("ladder.n_sites", "must be >= 2");
        c.at_least("ladder.n_points", static_cast<long>(analysis::kMinFitPoints));
        const auto ms = c.get<std::vector<int>>("ladder.m");
        if (ms.empty()) c.error("ladder.m", "must not be empty");
        const auto window = c.get<std::vector<double>>("ladder.window");
        if (!window.empty() && (window.size() != 2 || !(window[0] > 0.0) || !(window[1] > window[0]))) {
            c.error("ladder.window", "must be [t_min, t_max] with 0 < t_min < t_max");
            return;
        }
        const double gamma = c.get<double>("chain.gamma");
        if (!(gamma > 0.0)) return;
        for (int m : ms) {
            if (m < 0 || m + 1 > n) {
                c.error("ladder.m", "order " + std::to_string(m) + " does not fit the chain");
                continue;
            }
            const analysis::FitWindow w =
                window.empty() ? analysis::default_window(m, n, gamma) : analysis::FitWindow{window[0], window[1]};
            if (const auto warn = analysis::window_warning(w, m, n, gamma)) {
                c.warning("ladder.window", "m = " + std::to_string(m) + ": " + *warn);
            }
        }
    }
    if (exp == "cloud") {
        c.at_least("cloud.n_per_side", 1);
        c.positive("cloud.spacing");
        c.positive("cloud.k0");
        c.positive("cloud.gamma");
        if (c.get<double>("cloud.dt") < 0.0) c.error("cloud.dt", "must be >= 0");
        c.at_least("cloud.record_every", 1);
        if (c.get<double>("cloud.t_end") < 0.0) c.error("cloud.t_end", "must be >= 0");
        const long side = c.get<long>("cloud.n_per_side");
        const long atom = c.get<long>("cloud.atom");
        if (atom < 0 || atom > side * side * side) c.error("cloud.atom", "must lie in [0, n_per_side^3]");
        const auto window = c.get<std::vector<double>>("cloud.window");
        if (!window.empty() && (window.size() != 2 || !(window[0] > 0.0) || !(window[1] > window[0]))) {
            c.error("cloud.window", "must be [t_min, t_max] with 0 < t_min < t_max");
        }
    }
}

} // namespace

std::vector<Diagnostic> validate(const ExperimentConfig& config)
{
    Checker c(config);
    const auto& values = config.values();
    const auto exp_it = values.find("experiment");
    std::string exp;
    if (exp_it == values.end()) {
        c.error("experiment", "missing required field 'experiment'");
    } else if (!exp_it->second.is_string()) {
        c.error("experiment", "must be a string");
    } else {
        exp = exp_it->second.get<std::string>();
        if (std::find(kExperiments.begin(), kExperiments.end(), exp) == kExperiments.end()) {
            c.error("experiment", "unknown experiment '" + exp + "'");
            exp.clear();
        }
    }

    bool types_ok = true;
    for (const auto& [key, v] : values) {
        const KeySpec* spec = find_key(key);
        if (!spec) {
            c.error(key, "unknown key '" + key + "'");
            types_ok = false;
            continue;
        }
        if (!exp.empty() && !applies(*spec, exp)) {
            c.error(key, "key '" + key + "' does not apply to experiment '" + exp + "'");
            types_ok = false;
            continue;
        }
        if (!type_matches(v, spec->type)) {
            c.error(key, std::string("must be ") + type_name(spec->type));
            types_ok = false;
        }
    }
    if (!types_ok || exp.empty()) return c.out;

    try {
        check_experiment(c, exp);
    } catch (const std::exception& e) {
        c.error("", e.what());
    }
    return c.out;
}

bool rejects(const std::vector<Diagnostic>& diagnostics, bool strict)
{
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [strict](const Diagnostic& d) { return d.severity == Severity::error || strict; });
}

} // namespace dissichain::runner
