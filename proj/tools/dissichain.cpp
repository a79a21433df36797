// dissichain: command-line front end: one subcommand per experiment

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dissichain/errors.hpp"
#include "dissichain/runner/config.hpp"
#include "dissichain/runner/runner.hpp"

namespace dr = dissichain::runner;

namespace {

struct Options {
    std::string config;
    std::string out;
    int threads{0};
    bool strict{false};
    std::vector<std::string> sets;
};

int run_subcommand(const std::string& experiment, const Options& opt)
{
    dr::ExperimentConfig cfg;
    try {
        if (!opt.config.empty()) cfg = dr::ExperimentConfig::load(opt.config);
        for (const auto& s : opt.sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw dr::ConfigSyntaxError("--set expects key=value, got '" + s + "'");
            cfg.set_text(s.substr(0, eq), s.substr(eq + 1));
        }
    } catch (const dissichain::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return dr::kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return dr::kExitValidation;
    }
    if (!cfg.has("experiment")) {
        cfg.set("experiment", experiment);
    } else if (cfg.experiment() != experiment) {
        std::cerr << "error [experiment]: configuration is for '" << cfg.experiment() << "', subcommand is '"
                  << experiment << "'\n";
        return dr::kExitValidation;
    }
    dr::RunOptions ro;
    ro.out_root = dr::resolve_out_root(opt.out);
    ro.threads = opt.threads;
    ro.strict = opt.strict;
    return dr::execute(cfg, ro, std::cout, std::cerr);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dissipatively coupled chain experiments"};
    app.require_subcommand(1);
    Options opt;
    int status = 0;

    for (const auto& name : dr::kExperiments) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", opt.config, "configuration file (.json or key-value text)");
        sub->add_option("--out", opt.out, "output root (default $DISSICHAIN_OUT or .)");
        sub->add_option("--threads", opt.threads, "worker threads for the parallel kernels")->check(CLI::NonNegativeNumber);
        sub->add_flag("--strict", opt.strict, "treat warnings as errors");
        sub->add_option("--set", opt.sets, "override a key, e.g. --set chain.n_sites=101");
        sub->callback([&status, &opt, name] { status = run_subcommand(name, opt); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dr::kExitValidation;
    }
    return status;
}
