// analysis.hpp: Power-law fits, temperature/flux fields and Fourier-law diagnostics

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "dissichain/chain.hpp"
#include "dissichain/state.hpp"

namespace dissichain::analysis {

struct SeriesPoint {
    double t{0.0};
    double p{0.0};
};

struct FitWindow {
    double t_min{0.0};
    double t_max{0.0};
};

struct DecayFit {
    double exponent{0.0};
    double amplitude{0.0};
    FitWindow window;
    double residual{0.0};  // RMS of the log-log residuals
    std::size_t n_points{0};
};

inline constexpr std::size_t kMinFitPoints = 10;

// Least-squares line through (log t, log p) for samples with t in
// [t_min, t_max]. Throws std::domain_error on a non-positive sample inside
// the window and std::invalid_argument when fewer than kMinFitPoints remain.
DecayFit fit_power_law(std::span<const SeriesPoint> series, FitWindow window);

// [max(3, 2m)/gamma, min(n_sites/4, 60)/gamma]
FitWindow default_window(int m, int n_sites, double gamma);

// Empty when gamma*t_min exceeds max(1, m) and gamma*t_max stays below
// n_sites/4; otherwise a human-readable reason.
std::optional<std::string> window_warning(FitWindow window, int m, int n_sites, double gamma);

struct GaussianFit {
    double amplitude{0.0};
    double mean{0.0};
    double variance{0.0};
    double residual{0.0};  // RMS over samples
};

// Least-squares fit of A exp(-(x-mu)^2 / (2 var)) to (x, y), started from
// the moments of y. Throws std::invalid_argument on mismatched or short input.
GaussianFit gaussian_fit(std::span<const double> x, std::span<const double> y);

struct ThermoField {
    Eigen::MatrixXd T_q;   // Re rho_kl
    Eigen::MatrixXd J_qx;  // d/dx along k
    Eigen::MatrixXd J_qy;  // d/dy along l
    Eigen::VectorXd T_class;
    Eigen::VectorXd J_class;

    // Energy flux along the chain, J_qx(k, k).
    Eigen::VectorXd diagonal_flux() const { return J_qx.diagonal(); }
};

// Central differences over 2a with mirrored (insulated) ends. The classical
// fields are filled by classical_average. Throws GuardError if any
// |Im rho_kl| exceeds 1e-10.
ThermoField quantum_fields(const SingleExcState& state, const ChainSpec& spec);

// T_class(k) = a sum_l T_q(k,l), J_class(k) = a sum_l J_qx(k,l).
void classical_average(ThermoField& field, const ChainSpec& spec);

// The same central difference used for J_q applied to a 1D profile.
Eigen::VectorXd discrete_gradient(const Eigen::VectorXd& f, double a);

// Population-weighted variance of the site index on the diagonal.
double second_moment(const SingleExcState& state);

struct FourierReport {
    std::vector<double> times;
    std::vector<double> W;                 // Re sum_kl rho_kl
    std::vector<double> total_population;  // trace rho
    std::vector<double> second_moment;
    double W_drift{0.0};                   // max |W(t) - W(0)|
    std::optional<DecayFit> population_fit;
};

// Series along a trajectory sampled at `times`. The total population is
// fitted over `window` when it is positive there with enough samples.
FourierReport fourier_breakage_report(std::span<const double> times, std::span<const SingleExcState> trajectory,
                                      FitWindow window);

void to_json(nlohmann::json& j, const FitWindow& w);
void to_json(nlohmann::json& j, const DecayFit& fit);
void to_json(nlohmann::json& j, const GaussianFit& fit);
void to_json(nlohmann::json& j, const FourierReport& report);

} // namespace dissichain::analysis
