// runner.cpp: Experiment drivers

#include "dissichain/runner/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "dissichain/analysis.hpp"
#include "dissichain/chain.hpp"
#include "dissichain/cloud.hpp"
#include "dissichain/errors.hpp"
#include "dissichain/io.hpp"
#include "dissichain/kernels.hpp"
#include "dissichain/lindblad_oracle.hpp"
#include "dissichain/multi_excitation.hpp"
#include "dissichain/single_excitation.hpp"

#ifndef DISSICHAIN_VERSION
#define DISSICHAIN_VERSION "0.0.0"
#endif

namespace dissichain::runner {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& d)
{
    std::string out = "configuration rejected";
    for (const auto& x : d) out += "\n  " + to_string(x);
    return out;
}

struct Context {
    const ExperimentConfig& cfg;
    fs::path dir;
    std::ostream& log;
    std::vector<std::string> files;
    json tolerances = json::object();

    template <class Writer>
    void csv(const std::string& name, Writer&& write)
    {
        const fs::path path = dir / name;
        auto os = io::open_output(path);
        write(os);
        io::finish(os, path);
        files.push_back(name);
    }

    void json_file(const std::string& name, const json& j)
    {
        io::write_json(dir / name, j);
        files.push_back(name);
    }
};

std::vector<double> sample_times(const ExperimentConfig& cfg)
{
    auto times = cfg.get<std::vector<double>>("time.samples");
    if (!times.empty()) return times;
    const double t_end = cfg.get<double>("time.t_end");
    const int n = cfg.get<int>("time.n_samples");
    times.push_back(0.0);
    for (int i = 1; i <= n; ++i) times.push_back(t_end * i / n);
    return times;
}

std::string indexed(const std::string& stem, std::size_t i)
{
    std::ostringstream name;
    name << stem << '_' << (i < 10 ? "0" : "") << i << ".csv";
    return name.str();
}

double max_abs_delta(const std::vector<double>& v)
{
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x - v.front()));
    return d;
}

// --- single ---------------------------------------------------------------

json run_single(Context& ctx)
{
    const ChainSpec chain = chain_from_config(ctx.cfg);
    const InitialStateSpec init = initial_from_config(ctx.cfg, chain);
    const SingleExcState start = build_initial_single(chain, init);

    std::vector<double> times = sample_times(ctx.cfg);
    auto matrix_times = ctx.cfg.get<std::vector<double>>("single.matrix_times");
    if (matrix_times.empty()) matrix_times.push_back(times.empty() ? 0.0 : times.back());
    times.insert(times.end(), matrix_times.begin(), matrix_times.end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    const std::string method = ctx.cfg.get<std::string>("single.method");
    const double dt = ctx.cfg.get<double>("time.dt");
    std::vector<SingleExcState> traj;
    if (method == "spectral") {
        const SpectralSolution sol = spectral_solve(chain, start);
        for (double t : times) traj.push_back(spectral_eval(sol, t));
    } else {
        traj = evolve_samples(chain, start, times, dt);
        ctx.tolerances["rk4_dt_gamma_max"] = 0.1;
    }
    ctx.log << "single: " << traj.size() << " samples on " << chain.n_sites << " sites (" << method << ")\n";

    ctx.csv("series.csv", [&](std::ostream& os) { io::write_site_series_csv(os, times, traj); });

    json matrices = json::array();
    std::sort(matrix_times.begin(), matrix_times.end());
    matrix_times.erase(std::unique(matrix_times.begin(), matrix_times.end()), matrix_times.end());
    for (std::size_t i = 0; i < matrix_times.size(); ++i) {
        const auto it = std::find(times.begin(), times.end(), matrix_times[i]);
        const auto& s = traj[static_cast<std::size_t>(it - times.begin())];
        const std::string name = indexed("rho", i);
        ctx.csv(name, [&](std::ostream& os) { io::write_matrix_csv(os, s.rho.real()); });
        matrices.push_back({{"t", matrix_times[i]}, {"file", name}});
    }

    std::vector<double> W, F;
    for (const auto& s : traj) {
        const auto sums = conserved_sums(s);
        W.push_back(sums.W.real());
        F.push_back(std::abs(sums.F));
    }
    const double t_final = times.back();
    json summary = {{"method", method},
                    {"initial", to_json(init)},
                    {"W_initial", W.front()},
                    {"W_drift", max_abs_delta(W)},
                    {"F_drift", max_abs_delta(F)},
                    {"total_population_final", total_population(traj.back())},
                    {"matrices", matrices}};

    const Eigen::VectorXd diag = traj.back().rho.diagonal().real();
    if (t_final > 0.0 && diag.sum() > 0.0) {
        std::vector<double> x(static_cast<std::size_t>(diag.size())), y(x.size());
        for (Eigen::Index k = 0; k < diag.size(); ++k) {
            x[static_cast<std::size_t>(k)] = chain.lattice_a * static_cast<double>(k + 1);
            y[static_cast<std::size_t>(k)] = diag(k);
        }
        try {
            summary["gaussian_fit_final"] = analysis::gaussian_fit(x, y);
            summary["diffusive_variance_final"] = chain.lattice_a * chain.lattice_a * chain.gamma * t_final;
        } catch (const std::invalid_argument&) {
        }
    }
    const auto window = analysis::default_window(0, chain.n_sites, chain.gamma);
    summary["fourier"] = analysis::fourier_breakage_report(times, traj, window);
    return summary;
}

// --- multi ----------------------------------------------------------------

MultiExcState multi_start(const ExperimentConfig& cfg, int n_sites)
{
    auto sites = multi_sites_from_config(cfg, n_sites);
    std::sort(sites.begin(), sites.end());
    auto basis = std::make_shared<const MultiBasis>(n_sites, static_cast<int>(sites.size()));
    return multi_pure_state(basis, {{sites, cplx{1.0, 0.0}}});
}

json run_multi(Context& ctx)
{
    const ChainSpec chain = chain_from_config(ctx.cfg);
    const MultiExcState start = multi_start(ctx.cfg, chain.n_sites);
    const int m = start.basis->m();
    const std::vector<double> times = sample_times(ctx.cfg);
    const double dt = ctx.cfg.get<double>("time.dt");

    std::vector<MultiExcState> traj;
    MultiExcState current = start;
    double t_now = 0.0;
    for (double t : times) {
        current = evolve_multi(chain, current, t - t_now, dt);
        t_now = t;
        traj.push_back(current);
    }
    ctx.log << "multi: m = " << m << ", basis " << start.basis->size() << ", " << traj.size() << " samples\n";
    ctx.tolerances["rk4_dt_gamma_max"] = 0.1;

    std::vector<std::vector<double>> rows;
    std::vector<double> weight;
    std::vector<double> coherence;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const Eigen::VectorXd occ = site_occupation(traj[s]);
        for (Eigen::Index k = 0; k < occ.size(); ++k) rows.push_back({times[s], static_cast<double>(k + 1), occ(k)});
        weight.push_back(traj[s].rho.trace().real());
        coherence.push_back(coherence_sum_multi(traj[s]).real());
    }
    const std::vector<std::string> header{"t", "k", "occupation"};
    ctx.csv("occupation.csv", [&](std::ostream& os) { io::write_table_csv(os, header, rows); });

    std::vector<std::vector<double>> sector_rows;
    for (std::size_t s = 0; s < traj.size(); ++s) sector_rows.push_back({times[s], weight[s], coherence[s]});
    const std::vector<std::string> sector_header{"t", "sector_weight", "coherence_sum"};
    ctx.csv("sector.csv", [&](std::ostream& os) { io::write_table_csv(os, sector_header, sector_rows); });

    if (m == 2) {
        ctx.csv("pairs_final.csv", [&](std::ostream& os) { io::write_matrix_csv(os, pair_occupation(traj.back())); });
    }
    if (ctx.cfg.get<bool>("multi.dump_generator")) {
        const SparseGenerator gen = build_generator(chain, m);
        ctx.csv("generator.csv", [&](std::ostream& os) { dump_generator(os, gen); });
    }
    return {{"m", m},
            {"sites", multi_sites_from_config(ctx.cfg, chain.n_sites)},
            {"basis_size", start.basis->size()},
            {"sector_weight_final", weight.back()},
            {"coherence_sum_initial", coherence.front()},
            {"coherence_sum_final", coherence.back()}};
}

// --- oracle-check ---------------------------------------------------------

std::vector<SingleExcState> oracle_single_starts(const ExperimentConfig& cfg, const ChainSpec& chain)
{
    const int draws = cfg.get<int>("oracle.draws");
    if (draws == 0) return {build_initial_single(chain, initial_from_config(cfg, chain))};
    std::mt19937_64 rng(cfg.get<std::uint64_t>("seed"));
    std::normal_distribution<double> normal;
    std::vector<SingleExcState> out;
    for (int d = 0; d < draws; ++d) {
        init::Custom c;
        cplx vac{normal(rng), normal(rng)};
        double norm = std::norm(vac);
        for (int k = 0; k < chain.n_sites; ++k) {
            c.amplitudes.emplace_back(normal(rng), normal(rng));
            norm += std::norm(c.amplitudes.back());
        }
        norm = std::sqrt(norm);
        for (auto& a : c.amplitudes) a /= norm;
        c.vacuum = vac / norm;
        out.push_back(build_initial_single(chain, c));
    }
    return out;
}

json run_oracle_check(Context& ctx)
{
    const ChainSpec chain = chain_from_config(ctx.cfg);
    const int m = ctx.cfg.get<int>("oracle.m");
    const std::vector<double> times = sample_times(ctx.cfg);
    const double dt = ctx.cfg.get<double>("time.dt");
    // A different step from the engine, so agreement is not shared truncation error.
    const double oracle_dt = std::min(dt / 2.0, 0.05 / chain.gamma);
    const double tol = ctx.cfg.get<double>("oracle.tolerance");
    const oracle::MasterEquation eq = oracle::chain_master_equation(chain);
    ctx.tolerances["oracle_tolerance"] = tol;
    ctx.tolerances["oracle_dt_rate_max"] = 0.05;
    ctx.tolerances["positivity"] = 1e-8;

    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    if (m == 1) {
        const auto starts = oracle_single_starts(ctx.cfg, chain);
        for (std::size_t d = 0; d < starts.size(); ++d) {
            const auto engine = evolve_samples(chain, starts[d], times, dt);
            const auto full = oracle::evolve_dense_samples(eq, oracle::embed_single(starts[d]), times, oracle_dt);
            for (std::size_t s = 0; s < times.size(); ++s) {
                const double dev = sup_distance(oracle::project_single_excitation(full[s]), engine[s]);
                worst = std::max(worst, dev);
                rows.push_back({static_cast<double>(d), times[s], dev});
            }
        }
    } else {
        const MultiExcState start = multi_start(ctx.cfg, chain.n_sites);
        const auto full = oracle::evolve_dense_samples(eq, oracle::embed_multi(start), times, oracle_dt);
        MultiExcState current = start;
        double t_now = 0.0;
        for (std::size_t s = 0; s < times.size(); ++s) {
            current = evolve_multi(chain, current, times[s] - t_now, dt);
            t_now = times[s];
            const auto projected = oracle::project_multi(full[s], start.basis);
            const double dev = (projected.rho - current.rho).cwiseAbs().maxCoeff();
            worst = std::max(worst, dev);
            rows.push_back({0.0, times[s], dev});
        }
    }
    const std::vector<std::string> header{"draw", "t", "deviation"};
    ctx.csv("deviation.csv", [&](std::ostream& os) { io::write_table_csv(os, header, rows); });
    ctx.log << "oracle-check: max deviation " << worst << " (tolerance " << tol << ")\n";

    json summary = {{"m", m}, {"max_deviation", worst}, {"tolerance", tol}, {"pass", worst <= tol}};
    if (worst > tol) {
        ctx.json_file("report.json", summary);
        std::ostringstream msg;
        msg << "oracle-check: engine deviates from the full master equation by " << worst << " > " << tol;
        throw GuardError(msg.str());
    }
    return summary;
}

// --- adiabatic ------------------------------------------------------------

json run_adiabatic(Context& ctx)
{
    const int n_chain = ctx.cfg.get<int>("adiabatic.n_chain");
    const double g = ctx.cfg.get<double>("adiabatic.g");
    const double horizon = ctx.cfg.get<double>("adiabatic.horizon");
    const int samples = ctx.cfg.get<int>("adiabatic.samples");
    const auto ratios = ctx.cfg.get<std::vector<double>>("adiabatic.ratios");

    std::vector<std::vector<double>> rows;
    json entries = json::array();
    std::vector<double> mismatches;
    for (double ratio : ratios) {
        const double Gamma = ratio * g;
        const double gamma_eff = oracle::effective_gamma(g, Gamma);
        const auto cmp = oracle::compare_adiabatic(n_chain, g, Gamma, gamma_eff, horizon, samples);
        const double alt_rate = g * g / Gamma;
        const auto alt = oracle::compare_adiabatic(n_chain, g, Gamma, alt_rate, horizon, samples);
        ctx.log << "adiabatic: Gamma/g = " << ratio << ", mismatch " << cmp.mismatch << " (g^2/Gamma: "
                << alt.mismatch << ")\n";
        rows.push_back({ratio, Gamma, gamma_eff, cmp.mismatch, alt_rate, alt.mismatch});
        mismatches.push_back(cmp.mismatch);
        entries.push_back({{"ratio", ratio},
                           {"Gamma", Gamma},
                           {"gamma_eff", gamma_eff},
                           {"mismatch", cmp.mismatch},
                           {"gamma_g2_over_Gamma", alt_rate},
                           {"mismatch_g2_over_Gamma", alt.mismatch}});
    }
    const std::vector<std::string> header{"ratio",    "Gamma",         "gamma_eff", "mismatch", "gamma_g2_over_Gamma",
                                          "mismatch_g2_over_Gamma"};
    ctx.csv("mismatch.csv", [&](std::ostream& os) { io::write_table_csv(os, header, rows); });
    bool monotone = true;
    for (std::size_t i = 1; i < mismatches.size(); ++i) monotone = monotone && mismatches[i] < mismatches[i - 1];
    ctx.tolerances["oracle_dt_rate_max"] = 0.05;
    return {{"n_chain", n_chain}, {"g", g}, {"horizon", horizon}, {"entries", entries}, {"monotone", monotone}};
}

// --- join -----------------------------------------------------------------

json run_join(Context& ctx)
{
    const double gamma = ctx.cfg.get<double>("chain.gamma");
    const ChainSpec a = make_chain(ctx.cfg.get<int>("join.n_a"), gamma);
    const ChainSpec b = make_chain(ctx.cfg.get<int>("join.n_b"), gamma);
    const JoinReport r =
        join_chains(a, ctx.cfg.get<double>("join.W_a"), b, ctx.cfg.get<double>("join.W_b"),
                    ctx.cfg.get<double>("join.t_relax"));
    ctx.log << "join: W_joined = " << r.W_joined << " after t_relax = " << r.t_relax << "\n";
    ctx.tolerances["relax_residual"] = kRelaxResidual;
    return {{"n_a", a.n_sites},
            {"n_b", b.n_sites},
            {"W_a", r.W_a},
            {"W_b", r.W_b},
            {"W_initial_block", r.W_initial_block},
            {"two_excitation_weight", r.two_excitation_weight},
            {"W_joined", r.W_joined},
            {"t_relax", r.t_relax},
            {"residual", r.residual},
            {"uniform_element", r.uniform_element},
            {"split_deviation_a", r.split_deviation_a},
            {"split_deviation_b", r.split_deviation_b}};
}

// --- decay-ladder ---------------------------------------------------------

std::vector<double> log_grid(analysis::FitWindow w, int n)
{
    std::vector<double> t(static_cast<std::size_t>(n));
    const double ratio = w.t_max / w.t_min;
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = w.t_min * std::pow(ratio, double(i) / (n - 1));
    t.front() = w.t_min;
    t.back() = w.t_max;
    return t;
}

json run_decay_ladder(Context& ctx)
{
    const int n = ctx.cfg.get<int>("ladder.n_sites");
    const double gamma = ctx.cfg.get<double>("chain.gamma");
    const int n_points = ctx.cfg.get<int>("ladder.n_points");
    const auto window_cfg = ctx.cfg.get<std::vector<double>>("ladder.window");
    const ChainSpec chain = make_chain(n, gamma);

    std::vector<std::vector<double>> rows;
    json fits = json::array();
    for (int m : ctx.cfg.get<std::vector<int>>("ladder.m")) {
        const int first = std::max(1, (n + 1) / 2 - m / 2);
        const int observed = first + m / 2;
        const SingleExcState start = build_initial_single(chain, init::Binomial{first, m});
        const SpectralSolution sol = spectral_solve(chain, start);
        const analysis::FitWindow window = window_cfg.empty() ? analysis::default_window(m, n, gamma)
                                                              : analysis::FitWindow{window_cfg[0], window_cfg[1]};
        std::vector<analysis::SeriesPoint> site, total;
        for (double t : log_grid(window, n_points)) {
            const double p = spectral_element(sol, observed, observed, t).real();
            const double pop = spectral_total_population(sol, t);
            site.push_back({t, p});
            total.push_back({t, pop});
            rows.push_back({static_cast<double>(m), t, p, pop});
        }
        json entry = {{"m", m}, {"first_site", first}, {"observed_site", observed}, {"expected", -(2.0 * m + 1.0)}};
        try {
            entry["site_fit"] = analysis::fit_power_law(site, window);
        } catch (const std::exception& e) {
            entry["site_fit"] = nullptr;
            entry["site_fit_error"] = e.what();
        }
        entry["total_population_fit"] = analysis::fit_power_law(total, window);
        ctx.log << "decay-ladder: m = " << m << ", exponent "
                << (entry["site_fit"].is_null() ? std::string("n/a") : entry["site_fit"]["exponent"].dump())
                << " (reference " << -(2 * m + 1) << ")\n";
        fits.push_back(entry);
    }
    const std::vector<std::string> header{"m", "t", "site_population", "total_population"};
    ctx.csv("ladder.csv", [&](std::ostream& os) { io::write_table_csv(os, header, rows); });
    return {{"n_sites", n}, {"fits", fits}};
}

// --- thermo ---------------------------------------------------------------

json run_thermo(Context& ctx)
{
    const ChainSpec chain = chain_from_config(ctx.cfg);
    const InitialStateSpec init = initial_from_config(ctx.cfg, chain);
    const SingleExcState start = build_initial_single(chain, init);
    const SpectralSolution sol = spectral_solve(chain, start);
    const std::vector<double> times = sample_times(ctx.cfg);

    std::vector<SingleExcState> traj;
    std::vector<std::vector<double>> rows;
    double max_T_class = 0.0, max_J_class = 0.0, min_T_q = 0.0;
    for (double t : times) {
        traj.push_back(spectral_eval(sol, t));
        const analysis::ThermoField f = analysis::quantum_fields(traj.back(), chain);
        const Eigen::VectorXd flux = f.diagonal_flux();
        for (Eigen::Index k = 0; k < f.T_class.size(); ++k) {
            rows.push_back({t, static_cast<double>(k + 1), f.T_q(k, k), flux(k), f.T_class(k), f.J_class(k)});
        }
        max_T_class = std::max(max_T_class, f.T_class.cwiseAbs().maxCoeff());
        max_J_class = std::max(max_J_class, f.J_class.cwiseAbs().maxCoeff());
        min_T_q = std::min(min_T_q, f.T_q.minCoeff());
    }
    const std::vector<std::string> header{"t", "k", "T_q_diag", "flux_diag", "T_class", "J_class"};
    ctx.csv("classical.csv", [&](std::ostream& os) { io::write_table_csv(os, header, rows); });

    const analysis::ThermoField last = analysis::quantum_fields(traj.back(), chain);
    ctx.csv("T_q_final.csv", [&](std::ostream& os) { io::write_matrix_csv(os, last.T_q); });
    ctx.csv("J_qx_final.csv", [&](std::ostream& os) { io::write_matrix_csv(os, last.J_qx); });
    ctx.csv("J_qy_final.csv", [&](std::ostream& os) { io::write_matrix_csv(os, last.J_qy); });
    ctx.log << "thermo: max |T_class| = " << max_T_class << ", min T_q = " << min_T_q << "\n";
    ctx.tolerances["imaginary_part_max"] = 1e-10;

    const auto window = analysis::default_window(0, chain.n_sites, chain.gamma);
    return {{"initial", to_json(init)},
            {"max_abs_T_class", max_T_class},
            {"max_abs_J_class", max_J_class},
            {"min_T_q", min_T_q},
            {"min_T_q_final", last.T_q.minCoeff()},
            {"second_moment_final", analysis::second_moment(traj.back())},
            {"fourier", analysis::fourier_breakage_report(times, traj, window)}};
}

// --- cloud ----------------------------------------------------------------

json run_cloud(Context& ctx)
{
    const int side = ctx.cfg.get<int>("cloud.n_per_side");
    cloud::CloudSpec spec{cloud::grid_cloud(side, ctx.cfg.get<double>("cloud.spacing")),
                          ctx.cfg.get<double>("cloud.k0"), ctx.cfg.get<double>("cloud.gamma"),
                          ctx.cfg.get<bool>("cloud.rwa")};
    int atom = ctx.cfg.get<int>("cloud.atom");
    if (atom == 0) {
        const int c = side / 2;
        atom = (c * side + c) * side + c + 1;
    }
    const double t_end = ctx.cfg.get<double>("cloud.t_end");
    double dt = ctx.cfg.get<double>("cloud.dt");
    if (dt == 0.0) dt = 0.05 / cloud::rate_scale(spec);

    Eigen::VectorXcd beta0 = Eigen::VectorXcd::Zero(spec.size());
    beta0(atom - 1) = 1.0;
    const auto traj = cloud::evolve_amplitudes(spec, beta0, t_end, dt, ctx.cfg.get<int>("cloud.record_every"));
    ctx.csv("trajectory.csv", [&](std::ostream& os) { cloud::write_trajectory_csv(os, traj); });

    std::vector<analysis::SeriesPoint> prob;
    double max_increase = 0.0;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        prob.push_back({traj.times[s], cloud::total_probability(traj.beta[s])});
        if (s > 0) max_increase = std::max(max_increase, prob[s].p - prob[s - 1].p);
    }
    const Eigen::VectorXcd rates = cloud::decay_rates(spec);
    json summary = {{"atoms", spec.size()},
                    {"rwa", spec.rwa},
                    {"excited_atom", atom},
                    {"dt", dt},
                    {"probability_final", prob.back().p},
                    {"max_probability_increase", max_increase},
                    {"non_increasing", max_increase <= 0.0},
                    {"slowest_rate", rates(0).real()},
                    {"fastest_rate", rates(rates.size() - 1).real()}};
    const auto window_cfg = ctx.cfg.get<std::vector<double>>("cloud.window");
    const analysis::FitWindow window =
        window_cfg.empty() ? analysis::FitWindow{1.0, t_end} : analysis::FitWindow{window_cfg[0], window_cfg[1]};
    try {
        summary["exploratory_fit"] = analysis::fit_power_law(prob, window);
    } catch (const std::exception& e) {
        summary["exploratory_fit"] = nullptr;
        summary["exploratory_fit_error"] = e.what();
    }
    ctx.log << "cloud: " << spec.size() << " atoms, final probability " << prob.back().p << "\n";
    ctx.tolerances["rk4_dt_rate_max"] = 0.1;
    return summary;
}

} // namespace

ValidationError::ValidationError(std::vector<Diagnostic> d)
    : std::invalid_argument(join_diagnostics(d)), diagnostics_(std::move(d))
{
}

fs::path resolve_out_root(const std::string& explicit_root)
{
    if (!explicit_root.empty()) return explicit_root;
    if (const char* env = std::getenv("DISSICHAIN_OUT"); env && *env) return env;
    return ".";
}

RunResult run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log)
{
    const auto diagnostics = validate(config);
    if (rejects(diagnostics, options.strict)) throw ValidationError(diagnostics);
    for (const auto& d : diagnostics) log << to_string(d) << "\n";
    if (options.threads > 0) kernels::set_thread_count(options.threads);

    const std::string exp = config.experiment();
    std::string sub = config.get<std::string>("output.dir");
    if (sub.empty()) sub = exp;
    Context ctx{config, options.out_root / sub, log, {}, json::object()};

    json summary;
    if (exp == "single") summary = run_single(ctx);
    else if (exp == "multi") summary = run_multi(ctx);
    else if (exp == "oracle-check") summary = run_oracle_check(ctx);
    else if (exp == "adiabatic") summary = run_adiabatic(ctx);
    else if (exp == "join") summary = run_join(ctx);
    else if (exp == "decay-ladder") summary = run_decay_ladder(ctx);
    else if (exp == "thermo") summary = run_thermo(ctx);
    else if (exp == "cloud") summary = run_cloud(ctx);

    ctx.json_file("report.json", summary);
    json warnings = json::array();
    for (const auto& d : diagnostics) warnings.push_back(to_string(d));
    const json manifest = {{"experiment", exp},
                           {"version", DISSICHAIN_VERSION},
                           {"modules",
                            {{"chain_model", DISSICHAIN_VERSION},
                             {"single_excitation_engine", DISSICHAIN_VERSION},
                             {"continuum_reference", DISSICHAIN_VERSION},
                             {"multi_excitation_engine", DISSICHAIN_VERSION},
                             {"lindblad_oracle", DISSICHAIN_VERSION},
                             {"analysis", DISSICHAIN_VERSION},
                             {"cloud_comparator", DISSICHAIN_VERSION},
                             {"cli_runner", DISSICHAIN_VERSION}}},
                           {"config", config.resolved()},
                           {"tolerances", ctx.tolerances},
                           {"warnings", warnings},
                           {"files", ctx.files}};
    io::write_json(ctx.dir / "manifest.json", manifest);
    ctx.files.push_back("manifest.json");
    return {ctx.dir, ctx.files, summary};
}

int execute(const ExperimentConfig& config, const RunOptions& options, std::ostream& log, std::ostream& err)
{
    try {
        const RunResult r = run(config, options, log);
        log << "wrote " << r.files.size() << " files to " << r.directory.string() << "\n";
        return kExitOk;
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return kExitValidation;
    } catch (const GuardError& e) {
        err << "numerical guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::logic_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    }
}

} // namespace dissichain::runner
