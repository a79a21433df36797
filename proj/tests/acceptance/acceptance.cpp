// Acceptance criteria: one PASS/FAIL line per criterion.
//
// Usage: acceptance [AC-n ...]   (no arguments runs all of them)
// Exit status is 0 only if every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dissichain/analysis.hpp"
#include "dissichain/chain.hpp"
#include "dissichain/cloud.hpp"
#include "dissichain/lindblad_oracle.hpp"
#include "dissichain/multi_excitation.hpp"
#include "dissichain/single_excitation.hpp"

using namespace dissichain;

namespace {

// Tolerances, fixed here and nowhere else.
constexpr double kSolverAgreement = 1e-8;      // AC-1
constexpr double kSolverSeconds = 10.0;        // AC-1
constexpr double kSolverStep = 0.005;          // AC-1, units of 1/gamma
constexpr double kOracleAgreement = 1e-6;      // AC-2, AC-3
constexpr double kConservationRate = 1e-10;    // AC-4, per unit gamma t
constexpr double kVarianceRelative = 0.05;     // AC-5
constexpr double kLadderSeconds = 300.0;       // AC-6
constexpr double kWDrift = 1e-10;              // AC-7
constexpr double kClassicalZero = 1e-10;       // AC-7
constexpr double kAdiabaticMismatch = 0.05;    // AC-8
constexpr double kJoinW = 0.05;                // AC-9
constexpr double kJoinSplit = 0.01;            // AC-9
constexpr double kFixedPoint = 1e-13;          // AC-10
constexpr double kSingleAtom = 1e-9;           // AC-11
constexpr double kModeRate = 1e-6;             // AC-11

constexpr unsigned kSeed = 20240601;

struct Outcome {
    bool pass{true};
    std::ostringstream detail;
    std::vector<std::string> failed;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            failed.push_back(what);
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linear_times(double t_end, int n)
{
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(t_end * i / n);
    return t;
}

std::vector<double> log_times(analysis::FitWindow w, int n)
{
    std::vector<double> t;
    for (int i = 0; i < n; ++i) t.push_back(w.t_min * std::pow(w.t_max / w.t_min, double(i) / (n - 1)));
    return t;
}

double sup(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<cplx> random_pure(std::mt19937_64& rng, int n, cplx& vacuum)
{
    std::normal_distribution<double> normal;
    std::vector<cplx> a(n);
    double norm = 0.0;
    for (auto& x : a) {
        x = {normal(rng), normal(rng)};
        norm += std::norm(x);
    }
    vacuum = {normal(rng), normal(rng)};
    norm += std::norm(vacuum);
    for (auto& x : a) x /= std::sqrt(norm);
    vacuum /= std::sqrt(norm);
    return a;
}

void ac1(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ChainSpec spec = make_chain(51);
    const SingleExcState s0 = build_initial_single(spec, init::SingleSite{26});
    const auto times = linear_times(10.0, 100);
    // Half the default step: at 0.01/gamma the RK4 global error is 3e-8.
    const double dt = kSolverStep / spec.gamma;
    const auto rk4 = evolve_samples(spec, s0, times, dt);
    const auto sol = spectral_solve(spec, s0);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, sup_distance(rk4[i], spectral_eval(sol, times[i])));
    const double elapsed = seconds_since(t0);
    o.detail << "sup|spectral - rk4| = " << worst << " over gamma t in [0,10] at dt = " << dt << ", runtime " << elapsed
             << " s";
    o.require(worst <= kSolverAgreement, "agreement");
    o.require(elapsed <= kSolverSeconds, "runtime");
}

void ac2(Outcome& o)
{
    const ChainSpec spec = make_chain(6);
    const auto eq = oracle::chain_master_equation(spec);
    const auto times = linear_times(5.0, 10);
    std::mt19937_64 rng(kSeed);
    double worst = 0.0;
    for (int draw = 0; draw < 5; ++draw) {
        cplx vac;
        const auto amps = random_pure(rng, 6, vac);
        const auto d0 = oracle::single_excitation_pure(6, amps, vac);
        const auto engine = evolve_samples(spec, oracle::project_single_excitation(d0), times, 0.01);
        const auto full = oracle::evolve_dense_samples(eq, d0, times, 0.005);
        for (std::size_t i = 0; i < times.size(); ++i) {
            worst = std::max(worst, sup_distance(oracle::project_single_excitation(full[i]), engine[i]));
        }
    }
    o.detail << "5 seeded draws, n=6, gamma t in [0,5]: sup deviation " << worst;
    o.require(worst <= kOracleAgreement, "oracle agreement");
}

void ac3(Outcome& o)
{
    const ChainSpec spec = make_chain(6);
    const auto eq = oracle::chain_master_equation(spec);
    auto basis = std::make_shared<const MultiBasis>(6, 2);
    const auto times = linear_times(5.0, 10);
    for (const auto& [label, tuple] : std::vector<std::pair<std::string, std::vector<int>>>{{"far {1,6}", {1, 6}},
                                                                                             {"near {3,4}", {3, 4}}}) {
        const auto m0 = multi_pure_state(basis, {{tuple, 1.0}});
        const auto full = oracle::evolve_dense_samples(eq, oracle::embed_multi(m0), times, 0.005);
        double worst = 0.0;
        MultiExcState m = m0;
        double t_prev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] > t_prev) m = evolve_multi(spec, m, times[i] - t_prev, 0.01);
            t_prev = times[i];
            worst = std::max(worst, sup(oracle::project_multi(full[i], basis).rho - m.rho));
        }
        o.detail << label << ": " << worst << "; ";
        o.require(worst <= kOracleAgreement, label);
    }
}

void ac4(Outcome& o)
{
    const ChainSpec spec = make_chain(51);
    std::mt19937_64 rng(kSeed);
    cplx vac;
    const auto amps = random_pure(rng, 51, vac);
    const std::vector<std::pair<std::string, InitialStateSpec>> runs{
        {"single_site", init::SingleSite{26}},
        {"pair+", init::EntangledPair{25, +1}},
        {"pair-", init::EntangledPair{25, -1}},
        {"binomial m=2", init::Binomial{25, 2}},
        {"custom", init::Custom{amps, vac}},
        {"stationary_mixture", init::StationaryMixture{1.0}}};
    const auto times = linear_times(10.0, 10);
    double worst_rate = 0.0;
    for (const auto& [label, init] : runs) {
        const SingleExcState s0 = build_initial_single(spec, init);
        const auto c0 = conserved_sums(s0);
        const auto traj = evolve_samples(spec, s0, times, default_dt(spec));
        for (std::size_t i = 1; i < times.size(); ++i) {
            const auto c = conserved_sums(traj[i]);
            const double drift = std::max(std::abs(c.W - c0.W), std::abs(c.F - c0.F));
            worst_rate = std::max(worst_rate, drift / (spec.gamma * times[i]));
        }
    }
    o.detail << runs.size() << " runs, N=51, gamma t in [0,10]: max drift per unit gamma t " << worst_rate;
    o.require(worst_rate <= kConservationRate, "conservation");
}

void ac5(Outcome& o)
{
    const ChainSpec spec = make_chain(51);
    const auto s = evolve(spec, build_initial_single(spec, init::SingleSite{26}), 9.0);
    std::vector<double> x, y;
    for (int k = 1; k <= 51; ++k) {
        x.push_back(k);
        y.push_back(site_population(s, k));
    }
    const auto fit = analysis::gaussian_fit(x, y);
    const double expected = spec.lattice_a * spec.lattice_a * spec.gamma * 9.0;
    const double rel = std::abs(fit.variance - expected) / expected;
    o.detail << "fitted variance " << fit.variance << " vs " << expected << " (relative " << rel << ")";
    o.require(rel <= kVarianceRelative, "variance");
}

struct LadderRun {
    analysis::DecayFit site;
    analysis::DecayFit total;
};

LadderRun ladder(int n, int m, analysis::FitWindow w)
{
    const ChainSpec spec = make_chain(n);
    const int first = (n + 1) / 2 - m / 2;
    const int observed = first + m / 2;
    const auto sol = spectral_solve(spec, build_initial_single(spec, init::Binomial{first, m}));
    std::vector<analysis::SeriesPoint> site, total;
    for (double t : log_times(w, 80)) {
        site.push_back({t, spectral_element(sol, observed, observed, t).real()});
        total.push_back({t, spectral_total_population(sol, t)});
    }
    return {analysis::fit_power_law(site, w), analysis::fit_power_law(total, w)};
}

void ac6(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    struct Case {
        int m, n;
        analysis::FitWindow w;
        double expected, tol;
    };
    const std::vector<Case> cases{{0, 201, {3.0, 20.0}, -1.0, 0.1},
                                  {1, 401, {10.0, 60.0}, -3.0, 0.2},
                                  {2, 401, {10.0, 60.0}, -5.0, 0.4}};
    for (const auto& c : cases) {
        const auto r = ladder(c.n, c.m, c.w);
        o.detail << "m=" << c.m << ": " << r.site.exponent << " (target " << c.expected << " +- " << c.tol << "); ";
        o.require(std::abs(r.site.exponent - c.expected) <= c.tol, "m=" + std::to_string(c.m));
        if (c.m == 0) {
            o.detail << "m=0 total population: " << r.total.exponent << " (target -0.5 +- 0.05); ";
            o.require(std::abs(r.total.exponent + 0.5) <= 0.05, "m=0 total population");
        }
    }
    const double elapsed = seconds_since(t0);
    o.detail << "runtime " << elapsed << " s";
    o.require(elapsed <= kLadderSeconds, "runtime");
}

void ac7(Outcome& o)
{
    // The m=0 ladder run integrated step by step, so that W is a genuine
    // numerical invariant rather than a property of the closed form.
    const ChainSpec spec = make_chain(201);
    const analysis::FitWindow w{3.0, 20.0};
    const auto times = log_times(w, 80);
    const SingleExcState s0 = build_initial_single(spec, init::Binomial{101, 0});
    const auto traj = evolve_samples(spec, s0, times, default_dt(spec));
    const double W0 = conserved_sums(s0).W.real();
    double drift = 0.0;
    std::vector<analysis::SeriesPoint> total;
    for (std::size_t i = 0; i < times.size(); ++i) {
        drift = std::max(drift, std::abs(conserved_sums(traj[i]).W - cplx(W0)));
        total.push_back({times[i], total_population(traj[i])});
    }
    const auto fit = analysis::fit_power_law(total, w);
    o.detail << "m=0, N=201: W drift " << drift << ", total population exponent " << fit.exponent << "; ";
    o.require(drift <= kWDrift, "W constant");
    o.require(std::abs(fit.exponent + 0.5) <= 0.05, "population exponent");

    const ChainSpec pair_spec = make_chain(52);
    const auto sol = spectral_solve(pair_spec, build_initial_single(pair_spec, init::EntangledPair{26, -1}));
    double worst = 0.0;
    for (double t : linear_times(20.0, 40)) {
        const auto f = analysis::quantum_fields(spectral_eval(sol, t), pair_spec);
        worst = std::max({worst, f.T_class.cwiseAbs().maxCoeff(), f.J_class.cwiseAbs().maxCoeff()});
    }
    o.detail << "antisymmetric pair: max |classical average| " << worst;
    o.require(worst <= kClassicalZero, "classical average zero");
}

void ac8(Outcome& o)
{
    const double g = 1.0;
    std::vector<double> mismatch, diag;
    for (double ratio : {20.0, 50.0, 100.0}) {
        const double Gamma = ratio * g;
        mismatch.push_back(oracle::compare_adiabatic(2, g, Gamma, oracle::effective_gamma(g, Gamma)).mismatch);
        diag.push_back(oracle::compare_adiabatic(2, g, Gamma, g * g / Gamma).mismatch);
    }
    o.detail << "gamma_eff = g^2/(2 Gamma): mismatch at Gamma/g = 20, 50, 100: " << mismatch[0] << ", " << mismatch[1]
             << ", " << mismatch[2] << " (diagnostic at g^2/Gamma: " << diag[0] << ", " << diag[1] << ", " << diag[2]
             << ")";
    o.require(mismatch[1] <= kAdiabaticMismatch, "mismatch at 50");
    o.require(mismatch[0] > mismatch[1] && mismatch[1] > mismatch[2], "monotone decrease");
}

void ac9(Outcome& o)
{
    const auto r = join_chains(make_chain(100), 1.0, make_chain(100), 1.0);
    const double split = std::max(r.split_deviation_a, r.split_deviation_b);
    o.detail << "W_joined " << r.W_joined << ", post-split deviation from W_joined/(M+N)^2 " << split
             << ", t_relax " << r.t_relax;
    o.require(std::abs(r.W_joined - 2.0) <= kJoinW, "W_joined");
    o.require(split <= kJoinSplit, "uniform split");
}

void ac10(Outcome& o)
{
    const ChainSpec spec = make_chain(51);
    const auto d = rhs_single(spec, stationary_state(spec));
    const double engine = std::max({sup(d.rho), sup(d.coh), std::abs(d.vac)});
    const ChainSpec small = make_chain(8);
    const auto full = oracle::apply_lindblad(small, oracle::embed_single(stationary_state(small)));
    const double brute = sup(full.rho);
    o.detail << "rhs_single (N=51) " << engine << ", apply_lindblad (n=8) " << brute;
    o.require(engine <= kFixedPoint, "rhs_single");
    o.require(brute <= kFixedPoint, "apply_lindblad");
}

void ac11(Outcome& o)
{
    const cloud::CloudSpec one{{Eigen::Vector3d::Zero()}, 1.0, 1.0, true};
    Eigen::VectorXcd b(1);
    b(0) = 1.0;
    const auto traj = cloud::evolve_amplitudes(one, b, 5.0, 0.01, 10);
    double single = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        single = std::max(single, std::abs(cloud::total_probability(traj.beta[i]) - std::exp(-2.0 * traj.times[i])));
    }
    o.detail << "single atom |P - exp(-2 gamma t)| " << single << "; ";
    o.require(single <= kSingleAtom, "single atom");

    const cloud::CloudSpec two{{Eigen::Vector3d::Zero(), Eigen::Vector3d(std::numbers::pi / 2.0, 0.0, 0.0)}, 1.0, 1.0, true};
    const auto rates = cloud::decay_rates(two);
    const double lo = 1.0 - 2.0 / std::numbers::pi, hi = 1.0 + 2.0 / std::numbers::pi;
    const double rate_err = std::max(std::abs(rates(0) - cplx(lo)), std::abs(rates(1) - cplx(hi)));
    o.detail << "two-atom rates " << rates(0).real() << ", " << rates(1).real() << " (error " << rate_err << "); ";
    o.require(rate_err <= kModeRate, "two-atom rates");

    const cloud::CloudSpec grid{cloud::grid_cloud(3, 0.5), 1.0, 1.0, true};
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(27);
    c(13) = 1.0;
    const auto cg = cloud::evolve_amplitudes(grid, c, 20.0, 0.05 / cloud::rate_scale(grid), 1);
    bool monotone = true;
    std::vector<analysis::SeriesPoint> series;
    for (std::size_t i = 0; i < cg.times.size(); ++i) {
        const double p = cloud::total_probability(cg.beta[i]);
        if (i > 0 && p > cloud::total_probability(cg.beta[i - 1])) monotone = false;
        series.push_back({cg.times[i], p});
    }
    o.detail << "27-atom RWA probability non-increasing: " << (monotone ? "yes" : "no");
    o.require(monotone, "RWA monotone");
    // Reported only.
    const analysis::FitWindow w{2.0, 20.0};
    const auto fit = analysis::fit_power_law(series, w);
    o.detail << "; reported: fitted exponent " << fit.exponent << " over gamma t in [" << w.t_min << ", " << w.t_max
             << "], not asserted";
}

void ac12(Outcome& o)
{
    const int n = 8;
    const auto gen = build_generator(make_chain(n), 2);
    const MultiBasis basis(n, 2);
    const auto size = static_cast<std::int64_t>(basis.size());
    struct Row {
        double diag{0.0};
        std::vector<double> off;
    };
    std::map<std::int64_t, Row> rows;
    for (const auto& e : gen.entries) {
        if (e.row == e.col) rows[e.row].diag += e.value;
        else rows[e.row].off.push_back(e.value);
    }
    auto adjacent = [](const std::vector<int>& t) { return t[1] == t[0] + 1; };
    auto interior = [n](const std::vector<int>& t) { return t[0] > 1 && t[1] < n; };
    auto plain = [&](const std::vector<int>& t) { return interior(t) && !adjacent(t); };
    auto all_gamma = [](const Row& r) { return std::all_of(r.off.begin(), r.off.end(), [](double v) { return v == 1.0; }); };
    int n4 = 0, bad4 = 0, n5 = 0, bad5 = 0;
    for (std::int64_t iL = 0; iL < size; ++iL) {
        for (std::int64_t iK = 0; iK < size; ++iK) {
            const auto& K = basis.tuple(iK);
            const auto& L = basis.tuple(iL);
            const Row& r = rows[iK + size * iL];
            if (plain(K) && plain(L)) {
                ++n4;
                if (!(r.diag == -8.0 && r.off.size() == 8 && all_gamma(r))) ++bad4;
            }
            if ((interior(K) && adjacent(K) && plain(L)) || (interior(L) && adjacent(L) && plain(K))) {
                ++n5;
                if (!(r.diag == -8.0 && r.off.size() == 6 && all_gamma(r))) ++bad5;
            }
        }
    }
    o.detail << "n=8, m=2: " << n4 - bad4 << "/" << n4 << " interior rows (-8 gamma, eight +gamma), " << n5 - bad5
             << "/" << n5 << " neighbour rows (-8 gamma, six +gamma)";
    o.require(n4 > 0 && bad4 == 0, "interior pattern");
    o.require(n5 > 0 && bad5 == 0, "neighbour pattern");
}

const std::vector<std::pair<std::string, std::pair<std::string, std::function<void(Outcome&)>>>> kCriteria{
    {"AC-1", {"solver cross-validation", ac1}},
    {"AC-2", {"oracle equivalence, single excitation", ac2}},
    {"AC-3", {"oracle equivalence, two excitations", ac3}},
    {"AC-4", {"conservation of W and F", ac4}},
    {"AC-5", {"Gaussian regime", ac5}},
    {"AC-6", {"decay-exponent ladder", ac6}},
    {"AC-7", {"Fourier breakage", ac7}},
    {"AC-8", {"adiabatic elimination", ac8}},
    {"AC-9", {"chain joining", ac9}},
    {"AC-10", {"stationary-state fixed point", ac10}},
    {"AC-11", {"cloud comparator properties", ac11}},
    {"AC-12", {"multi-excitation generator structure", ac12}},
};

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> selected(argv + 1, argv + argc);
    bool all_pass = true;
    int ran = 0;
    std::cout << std::setprecision(4);
    for (const auto& [id, entry] : kCriteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
        ++ran;
        Outcome o;
        o.detail << std::setprecision(4);
        try {
            entry.second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        all_pass = all_pass && o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << entry.first << ": " << o.detail.str();
        for (const auto& f : o.failed) std::cout << " [failed: " << f << "]";
        std::cout << std::endl;
    }
    if (ran == 0) {
        std::cerr << "no criterion matched\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}
