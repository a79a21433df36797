// continuum.hpp: Closed-form continuum solutions used as analytic references

#pragma once

#include <ostream>
#include <span>

namespace dissichain::continuum {

struct ContinuumParams {
    double a{1.0};
    double gamma{1.0};
    double x0{0.0};
    double y0{0.0};

    void validate() const;
};

// (1 / (4 a^2 gamma t)) exp(-[(x-x0)^2 + (y-y0)^2] / (2 a^2 gamma t)).
// This Gaussian has per-axis variance a^2 gamma t; note it solves the heat
// equation with diffusivity a^2 gamma / 2 (see heat_residual_2d).
double fundamental_solution_2d(const ContinuumParams& p, double x, double y, double t);

// Unit-mass 1D heat kernel with diffusivity a^2 gamma, centred at x0:
// (1 / sqrt(4 pi a^2 gamma t)) exp(-(z - x0)^2 / (4 a^2 gamma t)).
double fundamental_solution_1d(const ContinuumParams& p, double z, double t);

// Moment expansion around rho0 for a localized signed profile f:
// rho0 * sum_{n < n_terms} 1/(n! (2 a^2 gamma t)^n)
//        * sum_{i,j} (-1)^{i+j} f_i f_j [i (x-x0) + j (y-y0)]^n
double series_approximation(const ContinuumParams& p, std::span<const double> f, double x, double y, double t,
                            int n_terms);

// The single order-n term of series_approximation divided by rho0.
double series_term(const ContinuumParams& p, std::span<const double> f, double x, double y, double t, int n);

// Default truncation for a binomial profile of order m.
inline int default_terms(int m) { return 2 * m + 2; }

// Relative residual |d_t rho - D lap| / (|d_t rho| + |D lap|) of
// fundamental_solution_2d, central differences with spatial step h and
// temporal step h*t.
double heat_residual_2d(const ContinuumParams& p, double diffusivity, double x, double y, double t, double h);

// Writes "x,y,value" rows of fundamental_solution_2d on a grid.
void write_grid_csv(std::ostream& os, const ContinuumParams& p, double t, std::span<const double> xs,
                    std::span<const double> ys);

} // namespace dissichain::continuum
