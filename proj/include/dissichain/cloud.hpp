// cloud.hpp: Amplitude dynamics of a dipole-coupled atomic cloud
//
// One excitation shared among atoms at fixed positions, coupled through the
// vacuum field. The full kernel exp(-i k0 r)/(k0 r) and its rotating-wave
// counterpart i sin(k0 r)/(k0 r) are both available.

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dissichain/chain.hpp"

namespace dissichain::cloud {

struct CloudSpec {
    std::vector<Eigen::Vector3d> positions;
    double k0{1.0};
    double gamma{1.0};
    bool rwa{true};

    int size() const { return static_cast<int>(positions.size()); }
    // Throws std::invalid_argument for an empty cloud, non-positive k0 or
    // gamma, or two atoms at the same place.
    void validate() const;
};

// K_jk for j != k, zero diagonal.
Eigen::MatrixXcd kernel(const CloudSpec& spec);

// d beta/dt = M beta with M = -gamma I + i gamma K.
Eigen::MatrixXcd amplitude_generator(const CloudSpec& spec);

// gamma (1 + max_j sum_k |K_jk|), the bound used by the step rule.
double rate_scale(const CloudSpec& spec);

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> beta;
};

// RK4 from beta0 up to t_end, recording t = 0 and every `record_every`-th
// step. Rejects dt * rate_scale > 0.1 with GuardError and an initial
// probability above 1 with std::invalid_argument.
Trajectory evolve_amplitudes(const CloudSpec& spec, const Eigen::VectorXcd& beta0, double t_end, double dt,
                             int record_every = 1);

double total_probability(const Eigen::VectorXcd& beta);

// rho_jk = beta_j conj(beta_k).
Eigen::MatrixXcd density_from_amplitudes(const Eigen::VectorXcd& beta);

// M rho + rho M^+, the equation of motion of density_from_amplitudes.
Eigen::MatrixXcd density_derivative(const CloudSpec& spec, const Eigen::MatrixXcd& rho);

// Eigenvalues of -M sorted by real part: the amplitude decay rates of the
// collective modes (imaginary parts are frequency shifts).
Eigen::VectorXcd decay_rates(const CloudSpec& spec);

// n^3 atoms on a cubic grid with the given spacing, first atom at the origin.
std::vector<Eigen::Vector3d> grid_cloud(int n_per_side, double spacing);

// Columns t, j, re_beta, im_beta, total_probability; j is 1-based.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

} // namespace dissichain::cloud
