// state.hpp: Single-excitation block of the chain density matrix

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dissichain {

// rho(k-1, l-1) = <1_k|rho|1_l>, coh(k-1) = <1_k|rho|0>, vac = <0|rho|0>.
struct SingleExcState {
    Eigen::MatrixXcd rho;
    Eigen::VectorXcd coh;
    double vac{0.0};

    int n_sites() const { return static_cast<int>(rho.rows()); }

    static SingleExcState zero(int n_sites);
};

// Largest |rho_kl - conj(rho_lk)|.
double hermiticity_defect(const SingleExcState& s);

// |trace(rho) + vac - 1|.
double trace_defect(const SingleExcState& s);

// Sup-norm distance over all three blocks.
double sup_distance(const SingleExcState& a, const SingleExcState& b);

} // namespace dissichain
