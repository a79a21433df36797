// cloud.cpp: Collective emission amplitudes

#include "dissichain/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dissichain/errors.hpp"
#include "dissichain/rk4.hpp"

namespace dissichain::cloud {

void CloudSpec::validate() const
{
    if (positions.empty()) throw std::invalid_argument("CloudSpec: no atoms");
    if (!(k0 > 0.0)) throw std::invalid_argument("CloudSpec: k0 must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("CloudSpec: gamma must be > 0");
    for (std::size_t j = 0; j < positions.size(); ++j) {
        for (std::size_t k = j + 1; k < positions.size(); ++k) {
            if ((positions[j] - positions[k]).norm() == 0.0) {
                throw std::invalid_argument("CloudSpec: atoms " + std::to_string(j + 1) + " and " +
                                            std::to_string(k + 1) + " coincide");
            }
        }
    }
}

Eigen::MatrixXcd kernel(const CloudSpec& spec)
{
    spec.validate();
    const int n = spec.size();
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double x = spec.k0 * (spec.positions[j] - spec.positions[k]).norm();
            const cplx v = spec.rwa ? cplx{0.0, std::sin(x) / x} : std::polar(1.0 / x, -x);
            K(j, k) = v;
            K(k, j) = v;
        }
    }
    return K;
}

Eigen::MatrixXcd amplitude_generator(const CloudSpec& spec)
{
    const Eigen::MatrixXcd K = kernel(spec);
    const Eigen::Index n = K.rows();
    return -spec.gamma * Eigen::MatrixXcd::Identity(n, n) + cplx{0.0, spec.gamma} * K;
}

double rate_scale(const CloudSpec& spec)
{
    const Eigen::MatrixXcd K = kernel(spec);
    return spec.gamma * (1.0 + K.cwiseAbs().rowwise().sum().maxCoeff());
}

Trajectory evolve_amplitudes(const CloudSpec& spec, const Eigen::VectorXcd& beta0, double t_end, double dt,
                             int record_every)
{
    spec.validate();
    if (beta0.size() != spec.size()) throw std::invalid_argument("evolve_amplitudes: one amplitude per atom");
    if (total_probability(beta0) > 1.0 + 1e-12) {
        throw std::invalid_argument("evolve_amplitudes: initial probability exceeds 1");
    }
    if (t_end < 0.0 || !(dt > 0.0) || record_every < 1) {
        throw std::invalid_argument("evolve_amplitudes: need t_end >= 0, dt > 0, record_every >= 1");
    }
    const double scale = rate_scale(spec);
    if (dt * scale > 0.1 + 1e-12) {
        throw GuardError("evolve_amplitudes: step too large, dt*rate = " + std::to_string(dt * scale) + " > 0.1");
    }
    const Eigen::MatrixXcd M = amplitude_generator(spec);
    const auto rhs = [&M](const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { dy.noalias() = M * y; };

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.beta.push_back(beta0);
    const long steps = step_count(t_end, dt);
    if (steps == 0) return traj;
    const double h = t_end / static_cast<double>(steps);
    Eigen::VectorXcd y = beta0;
    for (long s = 1; s <= steps; ++s) {
        rk4_integrate(y, h, h, rhs);
        if (s % record_every == 0 || s == steps) {
            traj.times.push_back(h * static_cast<double>(s));
            traj.beta.push_back(y);
        }
    }
    return traj;
}

double total_probability(const Eigen::VectorXcd& beta) { return beta.squaredNorm(); }

Eigen::MatrixXcd density_from_amplitudes(const Eigen::VectorXcd& beta) { return beta * beta.adjoint(); }

Eigen::MatrixXcd density_derivative(const CloudSpec& spec, const Eigen::MatrixXcd& rho)
{
    const Eigen::MatrixXcd M = amplitude_generator(spec);
    if (rho.rows() != M.rows() || rho.cols() != M.cols()) {
        throw std::invalid_argument("density_derivative: rho does not match the cloud size");
    }
    return M * rho + rho * M.adjoint();
}

Eigen::VectorXcd decay_rates(const CloudSpec& spec)
{
    const Eigen::MatrixXcd M = amplitude_generator(spec);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(-M, false);
    Eigen::VectorXcd ev = solver.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    return ev;
}

std::vector<Eigen::Vector3d> grid_cloud(int n_per_side, double spacing)
{
    if (n_per_side < 1 || !(spacing > 0.0)) throw std::invalid_argument("grid_cloud: need n >= 1, spacing > 0");
    std::vector<Eigen::Vector3d> out;
    for (int i = 0; i < n_per_side; ++i) {
        for (int j = 0; j < n_per_side; ++j) {
            for (int k = 0; k < n_per_side; ++k) out.emplace_back(i * spacing, j * spacing, k * spacing);
        }
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    os << "t,j,re_beta,im_beta,total_probability\n" << std::setprecision(17);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const double p = total_probability(traj.beta[s]);
        for (Eigen::Index j = 0; j < traj.beta[s].size(); ++j) {
            os << traj.times[s] << ',' << j + 1 << ',' << traj.beta[s](j).real() << ',' << traj.beta[s](j).imag()
               << ',' << p << '\n';
        }
    }
}

} // namespace dissichain::cloud
