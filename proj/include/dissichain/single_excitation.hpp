// single_excitation.hpp: Single-excitation block dynamics: RK4 and exact spectral solution
//
// Within the single-excitation sector the master equation closes on three
// blocks: rho_kl (a 2D continuous-time random walk), rho_k0 (a 1D walk), and
// the vacuum population, which absorbs whatever leaves the trace.

#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dissichain/chain.hpp"
#include "dissichain/state.hpp"

namespace dissichain {

// d/dt of every block. The vac component of the result is -Re d trace(rho)/dt.
// Throws std::invalid_argument on dimension mismatch.
SingleExcState rhs_single(const ChainSpec& spec, const SingleExcState& state);

// Default integration step, 0.01 / gamma.
double default_dt(const ChainSpec& spec);

// Fixed-step RK4 of rhs_single up to t_end. Rejects dt * gamma > 0.1 with
// GuardError.
SingleExcState evolve(const ChainSpec& spec, const SingleExcState& state, double t_end, double dt);
SingleExcState evolve(const ChainSpec& spec, const SingleExcState& state, double t_end);

// States at each of the (non-decreasing) sample times, integrating from 0.
std::vector<SingleExcState> evolve_samples(const ChainSpec& spec, const SingleExcState& state,
                                           std::span<const double> times, double dt);

// Decay rate of 1D mode label m in [1, n_sites]. Label n_sites is the zero mode.
double mode_rate(const ChainSpec& spec, int m);

// lambda_{m,n} = mode_rate(m) + mode_rate(n); labels in [1, n_sites].
double eigenvalue(const ChainSpec& spec, int m, int n);

// Orthonormal eigenvector |Phi_l> of the 1D walk, l in [1, n_sites].
// |Phi_{n_sites}> is the uniform (stationary) vector.
Eigen::VectorXd basis_vector(const ChainSpec& spec, int l);

// All basis vectors as columns, column l-1 = |Phi_l>.
Eigen::MatrixXd mode_matrix(const ChainSpec& spec);

class SpectralSolution {
public:
    SpectralSolution(ChainSpec spec, Eigen::MatrixXd modes, Eigen::VectorXd rates,
                     Eigen::MatrixXcd coeff, Eigen::VectorXcd coh_coeff, double sector_weight);

    const ChainSpec& spec() const { return spec_; }
    const Eigen::MatrixXd& modes() const { return modes_; }
    // 1D rates per label (index l-1).
    const Eigen::VectorXd& rates() const { return rates_; }
    // <Phi_m|rho(0)|Phi_n> at (m-1, n-1).
    const Eigen::MatrixXcd& coefficients() const { return coeff_; }
    const Eigen::VectorXcd& coherence_coefficients() const { return coh_coeff_; }
    // trace(rho) + vac, constant in time.
    double sector_weight() const { return sector_weight_; }

    // alpha^{kl}_{mn}: rho_kl(t) = sum_mn alpha^{kl}_{mn} exp(-lambda_mn t). 1-based.
    cplx alpha(int k, int l, int m, int n) const;
    double lambda(int m, int n) const { return rates_(m - 1) + rates_(n - 1); }

private:
    ChainSpec spec_;
    Eigen::MatrixXd modes_;
    Eigen::VectorXd rates_;
    Eigen::MatrixXcd coeff_;
    Eigen::VectorXcd coh_coeff_;
    double sector_weight_;
};

SpectralSolution spectral_solve(const ChainSpec& spec, const SingleExcState& initial);

// Full state at time t >= 0.
SingleExcState spectral_eval(const SpectralSolution& sol, double t);

// Single element rho_kl(t) in O(n^2); 1-based indices.
cplx spectral_element(const SpectralSolution& sol, int k, int l, double t);

// sum_k rho_kk(t) in O(n).
double spectral_total_population(const SpectralSolution& sol, double t);

// Exact propagation of a rectangular block rho_kl with k on chain `rows`
// and l on chain `cols` (each evolving under its own walk).
Eigen::MatrixXcd propagate_block(const Eigen::MatrixXcd& block, const ChainSpec& rows,
                                 const ChainSpec& cols, double t);

struct ConservedSums {
    cplx W;  // sum_kl rho_kl
    cplx F;  // sum_k rho_k0
};
ConservedSums conserved_sums(const SingleExcState& state);

double site_population(const SingleExcState& state, int k);
double total_population(const SingleExcState& state);

// Explicit generator of the rho_kl block as (row, col, coefficient) triplets
// over the column-major vectorization index k + n*l (0-based).
struct Triplet {
    long row;
    long col;
    double value;
};
std::vector<Triplet> single_generator_triplets(const ChainSpec& spec);

} // namespace dissichain
