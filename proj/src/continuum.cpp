// continuum.cpp: Heat-kernel references and the moment expansion

#include "dissichain/continuum.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace dissichain::continuum {

namespace {

void require_positive_time(double t, const char* what)
{
    if (!(t > 0.0)) throw std::invalid_argument(std::string(what) + ": t must be > 0");
}

} // namespace

void ContinuumParams::validate() const
{
    if (!(a > 0.0)) throw std::invalid_argument("ContinuumParams: a must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("ContinuumParams: gamma must be > 0");
}

double fundamental_solution_2d(const ContinuumParams& p, double x, double y, double t)
{
    p.validate();
    require_positive_time(t, "fundamental_solution_2d");
    const double s = p.a * p.a * p.gamma * t;
    const double r2 = (x - p.x0) * (x - p.x0) + (y - p.y0) * (y - p.y0);
    return std::exp(-r2 / (2.0 * s)) / (4.0 * s);
}

double fundamental_solution_1d(const ContinuumParams& p, double z, double t)
{
    p.validate();
    require_positive_time(t, "fundamental_solution_1d");
    const double d = p.a * p.a * p.gamma * t;
    const double dz = z - p.x0;
    return std::exp(-dz * dz / (4.0 * d)) / std::sqrt(4.0 * std::numbers::pi * d);
}

double series_term(const ContinuumParams& p, std::span<const double> f, double x, double y, double t, int n)
{
    p.validate();
    require_positive_time(t, "series_term");
    if (n < 0) throw std::invalid_argument("series_term: order must be >= 0");
    const double dx = x - p.x0;
    const double dy = y - p.y0;
    const auto m = static_cast<int>(f.size());
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            sum += sign * f[i] * f[j] * std::pow(i * dx + j * dy, n);
        }
    }
    const double scale = 2.0 * p.a * p.a * p.gamma * t;
    return sum / (std::tgamma(n + 1.0) * std::pow(scale, n));
}

double series_approximation(const ContinuumParams& p, std::span<const double> f, double x, double y, double t,
                            int n_terms)
{
    require_positive_time(t, "series_approximation");
    if (n_terms < 1) throw std::invalid_argument("series_approximation: n_terms must be >= 1");
    if (f.empty()) throw std::invalid_argument("series_approximation: empty profile");
    double total = 0.0;
    for (int n = 0; n < n_terms; ++n) total += series_term(p, f, x, y, t, n);
    return fundamental_solution_2d(p, x, y, t) * total;
}

double heat_residual_2d(const ContinuumParams& p, double diffusivity, double x, double y, double t, double h)
{
    auto rho = [&](double xx, double yy, double tt) { return fundamental_solution_2d(p, xx, yy, tt); };
    const double ht = h * t;
    const double dt_rho = (rho(x, y, t + ht) - rho(x, y, t - ht)) / (2.0 * ht);
    const double c = rho(x, y, t);
    const double lap = (rho(x + h, y, t) + rho(x - h, y, t) + rho(x, y + h, t) + rho(x, y - h, t) - 4.0 * c) / (h * h);
    return std::abs(dt_rho - diffusivity * lap) / (std::abs(dt_rho) + std::abs(diffusivity * lap));
}

void write_grid_csv(std::ostream& os, const ContinuumParams& p, double t, std::span<const double> xs,
                    std::span<const double> ys)
{
    os << "x,y,value\n" << std::setprecision(17);
    for (double x : xs) {
        for (double y : ys) os << x << ',' << y << ',' << fundamental_solution_2d(p, x, y, t) << '\n';
    }
}

} // namespace dissichain::continuum
