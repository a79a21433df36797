// analysis.cpp: Fits and derived fields

#include "dissichain/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "dissichain/errors.hpp"
#include "dissichain/single_excitation.hpp"

namespace dissichain::analysis {

DecayFit fit_power_law(std::span<const SeriesPoint> series, FitWindow window)
{
    if (!(window.t_min > 0.0) || !(window.t_max > window.t_min)) {
        throw std::invalid_argument("fit_power_law: window must satisfy 0 < t_min < t_max");
    }
    std::vector<double> lx, ly;
    for (const auto& pt : series) {
        if (pt.t < window.t_min || pt.t > window.t_max) continue;
        if (!(pt.p > 0.0)) {
            std::ostringstream msg;
            msg << "fit_power_law: non-positive sample p = " << pt.p << " at t = " << pt.t;
            throw std::domain_error(msg.str());
        }
        lx.push_back(std::log(pt.t));
        ly.push_back(std::log(pt.p));
    }
    if (lx.size() < kMinFitPoints) {
        throw std::invalid_argument("fit_power_law: " + std::to_string(lx.size()) + " points in window, need " +
                                    std::to_string(kMinFitPoints));
    }
    const auto n = static_cast<Eigen::Index>(lx.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = lx[static_cast<std::size_t>(i)];
        b(i) = ly[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd r = A * coef - b;

    DecayFit fit;
    fit.exponent = coef(1);
    fit.amplitude = std::exp(coef(0));
    fit.window = window;
    fit.residual = std::sqrt(r.squaredNorm() / static_cast<double>(n));
    fit.n_points = lx.size();
    return fit;
}

FitWindow default_window(int m, int n_sites, double gamma)
{
    if (!(gamma > 0.0)) throw std::invalid_argument("default_window: gamma must be > 0");
    const double lo = std::max(3.0, 2.0 * m);
    const double hi = std::min(n_sites / 4.0, 60.0);
    return {lo / gamma, hi / gamma};
}

std::optional<std::string> window_warning(FitWindow window, int m, int n_sites, double gamma)
{
    const double lo = gamma * window.t_min;
    const double hi = gamma * window.t_max;
    std::ostringstream msg;
    if (lo < std::max(1.0, static_cast<double>(m))) {
        msg << "fit window starts at gamma*t = " << lo << ", below the spreading scale " << std::max(1, m);
    } else if (hi > n_sites / 4.0) {
        msg << "fit window ends at gamma*t = " << hi << ", past n_sites/4 = " << n_sites / 4.0
            << " where the chain ends are felt";
    } else {
        return std::nullopt;
    }
    return msg.str();
}

namespace {

struct GaussianResidual : Eigen::DenseFunctor<double> {
    std::span<const double> x, y;

    GaussianResidual(std::span<const double> xs, std::span<const double> ys)
        : Eigen::DenseFunctor<double>(3, static_cast<int>(xs.size())), x(xs), y(ys)
    {
    }

    int operator()(const InputType& p, ValueType& f) const
    {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - p(1);
            f(static_cast<Eigen::Index>(i)) = p(0) * std::exp(-d * d / (2.0 * p(2))) - y[i];
        }
        return 0;
    }

    int df(const InputType& p, JacobianType& J) const
    {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const double d = x[i] - p(1);
            const double e = std::exp(-d * d / (2.0 * p(2)));
            J(r, 0) = e;
            J(r, 1) = p(0) * e * d / p(2);
            J(r, 2) = p(0) * e * d * d / (2.0 * p(2) * p(2));
        }
        return 0;
    }
};

} // namespace

GaussianFit gaussian_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) throw std::invalid_argument("gaussian_fit: x and y differ in length");
    if (x.size() < 4) throw std::invalid_argument("gaussian_fit: need at least 4 samples");

    double mass = 0.0, mean = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mass += y[i];
        mean += x[i] * y[i];
        peak = std::max(peak, y[i]);
    }
    if (!(mass > 0.0)) throw std::invalid_argument("gaussian_fit: profile has no positive mass");
    mean /= mass;
    double var = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) var += (x[i] - mean) * (x[i] - mean) * y[i];
    var = std::max(var / mass, 1e-3);

    GaussianResidual functor(x, y);
    Eigen::LevenbergMarquardt<GaussianResidual> lm(functor);
    lm.setXtol(1e-14);
    lm.setFtol(1e-14);
    lm.setMaxfev(2000);
    Eigen::VectorXd p(3);
    p << peak, mean, var;
    lm.minimize(p);

    Eigen::VectorXd f(static_cast<Eigen::Index>(x.size()));
    functor(p, f);
    return {p(0), p(1), p(2), std::sqrt(f.squaredNorm() / static_cast<double>(x.size()))};
}

Eigen::VectorXd discrete_gradient(const Eigen::VectorXd& f, double a)
{
    const Eigen::Index n = f.size();
    Eigen::VectorXd g(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double lo = f(k > 0 ? k - 1 : 0);
        const double hi = f(k + 1 < n ? k + 1 : n - 1);
        g(k) = (hi - lo) / (2.0 * a);
    }
    return g;
}

ThermoField quantum_fields(const SingleExcState& state, const ChainSpec& spec)
{
    spec.validate();
    if (state.n_sites() != spec.n_sites) throw std::invalid_argument("quantum_fields: state/spec size mismatch");
    const double imag = state.rho.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-10) {
        std::ostringstream msg;
        msg << "quantum_fields: state is not real, max |Im rho_kl| = " << imag;
        throw GuardError(msg.str());
    }
    const Eigen::Index n = spec.n_sites;
    ThermoField field;
    field.T_q = state.rho.real();
    field.J_qx.resize(n, n);
    field.J_qy.resize(n, n);
    for (Eigen::Index l = 0; l < n; ++l) field.J_qx.col(l) = discrete_gradient(field.T_q.col(l), spec.lattice_a);
    for (Eigen::Index k = 0; k < n; ++k) {
        field.J_qy.row(k) = discrete_gradient(field.T_q.row(k).transpose(), spec.lattice_a).transpose();
    }
    classical_average(field, spec);
    return field;
}

void classical_average(ThermoField& field, const ChainSpec& spec)
{
    field.T_class = field.T_q.rowwise().sum() * spec.lattice_a;
    field.J_class = field.J_qx.rowwise().sum() * spec.lattice_a;
}

double second_moment(const SingleExcState& state)
{
    const Eigen::VectorXd p = state.rho.diagonal().real();
    const double mass = p.sum();
    if (!(mass > 0.0)) return 0.0;
    const Eigen::VectorXd k = Eigen::VectorXd::LinSpaced(p.size(), 1.0, static_cast<double>(p.size()));
    const double mean = k.dot(p) / mass;
    return (k.array() - mean).square().matrix().dot(p) / mass;
}

FourierReport fourier_breakage_report(std::span<const double> times, std::span<const SingleExcState> trajectory,
                                      FitWindow window)
{
    if (times.size() != trajectory.size()) {
        throw std::invalid_argument("fourier_breakage_report: times and trajectory differ in length");
    }
    FourierReport report;
    std::vector<SeriesPoint> pop;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto& s = trajectory[i];
        report.times.push_back(times[i]);
        report.W.push_back(conserved_sums(s).W.real());
        report.total_population.push_back(total_population(s));
        report.second_moment.push_back(second_moment(s));
        pop.push_back({times[i], report.total_population.back()});
    }
    for (double w : report.W) report.W_drift = std::max(report.W_drift, std::abs(w - report.W.front()));
    try {
        report.population_fit = fit_power_law(pop, window);
    } catch (const std::exception&) {
        report.population_fit.reset();
    }
    return report;
}

void to_json(nlohmann::json& j, const FitWindow& w) { j = nlohmann::json::array({w.t_min, w.t_max}); }

void to_json(nlohmann::json& j, const DecayFit& fit)
{
    j = {{"exponent", fit.exponent},
         {"amplitude", fit.amplitude},
         {"window", fit.window},
         {"residual", fit.residual},
         {"n_points", fit.n_points}};
}

void to_json(nlohmann::json& j, const GaussianFit& fit)
{
    j = {{"amplitude", fit.amplitude}, {"mean", fit.mean}, {"variance", fit.variance}, {"residual", fit.residual}};
}

void to_json(nlohmann::json& j, const FourierReport& report)
{
    j = {{"W_drift", report.W_drift}};
    if (report.population_fit) {
        j["population_fit"] = *report.population_fit;
    } else {
        j["population_fit"] = nullptr;
    }
    if (!report.W.empty()) {
        j["W_initial"] = report.W.front();
        j["total_population_final"] = report.total_population.back();
        j["second_moment_final"] = report.second_moment.back();
    }
}

} // namespace dissichain::analysis
