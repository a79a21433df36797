// single_excitation.cpp: rhs_single, RK4 evolution and the exact spectral solution

#include "dissichain/single_excitation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dissichain/errors.hpp"
#include "dissichain/kernels.hpp"
#include "dissichain/rk4.hpp"

namespace dissichain {

namespace {

void require_dims(const ChainSpec& spec, const SingleExcState& s)
{
    const auto n = static_cast<Eigen::Index>(spec.n_sites);
    if (s.rho.rows() != n || s.rho.cols() != n || s.coh.size() != n) {
        throw std::invalid_argument("single-excitation state does not match chain of " +
                                    std::to_string(spec.n_sites) + " sites");
    }
}

void require_label(const ChainSpec& spec, int l, const char* what)
{
    if (l < 1 || l > spec.n_sites) {
        throw std::out_of_range(std::string(what) + ": index " + std::to_string(l) + " outside [1, " +
                                std::to_string(spec.n_sites) + "]");
    }
}

// Packed layout: rho (n*n, column-major) | coh (n) | vac (1).
Eigen::VectorXcd pack(const SingleExcState& s)
{
    const Eigen::Index n = s.rho.rows();
    Eigen::VectorXcd y(n * n + n + 1);
    y.head(n * n) = Eigen::Map<const Eigen::VectorXcd>(s.rho.data(), n * n);
    y.segment(n * n, n) = s.coh;
    y(n * n + n) = s.vac;
    return y;
}

SingleExcState unpack(const Eigen::VectorXcd& y, Eigen::Index n)
{
    SingleExcState s;
    s.rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), n, n);
    s.coh = y.segment(n * n, n);
    s.vac = y(n * n + n).real();
    return s;
}

class PackedRhs {
public:
    explicit PackedRhs(const ChainSpec& spec) : rates_(bond_rates(spec)), n_(spec.n_sites) {}

    void operator()(const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const
    {
        const Eigen::Index nn = n_ * n_;
        const kernels::WalkRates w{rates_.right, rates_.left};
        kernels::walk2d_rhs(w, {y.data(), static_cast<std::size_t>(nn)}, {dy.data(), static_cast<std::size_t>(nn)});
        kernels::walk1d_rhs(w, {y.data() + nn, static_cast<std::size_t>(n_)},
                            {dy.data() + nn, static_cast<std::size_t>(n_)});
        // Trace leaves only through the diagonal; the vacuum receives it.
        std::complex<double> dtrace{0.0, 0.0};
        for (Eigen::Index k = 0; k < n_; ++k) dtrace += dy(k + k * n_);
        dy(nn + n_) = -dtrace.real();
    }

private:
    BondRates rates_;
    Eigen::Index n_;
};

// 1D walk spectrum of the insulated path graph, label l -> q = l mod n.
int label_to_q(int l, int n) { return l % n; }

} // namespace

SingleExcState rhs_single(const ChainSpec& spec, const SingleExcState& state)
{
    spec.validate();
    require_dims(spec, state);
    const Eigen::VectorXcd y = pack(state);
    Eigen::VectorXcd dy(y.size());
    const PackedRhs rhs(spec);
    rhs(y, dy);
    return unpack(dy, spec.n_sites);
}

double default_dt(const ChainSpec& spec) { return 0.01 / spec.gamma; }

SingleExcState evolve(const ChainSpec& spec, const SingleExcState& state, double t_end, double dt)
{
    spec.validate();
    require_dims(spec, state);
    if (t_end < 0.0) throw std::invalid_argument("evolve: t_end must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (dt * spec.gamma > 0.1 + 1e-12) {
        throw GuardError("evolve: step too large, dt*gamma = " + std::to_string(dt * spec.gamma) + " > 0.1");
    }
    if (t_end == 0.0) return state;
    Eigen::VectorXcd y = pack(state);
    rk4_integrate(y, t_end, dt, PackedRhs(spec));
    return unpack(y, spec.n_sites);
}

SingleExcState evolve(const ChainSpec& spec, const SingleExcState& state, double t_end)
{
    return evolve(spec, state, t_end, default_dt(spec));
}

std::vector<SingleExcState> evolve_samples(const ChainSpec& spec, const SingleExcState& state,
                                           std::span<const double> times, double dt)
{
    std::vector<SingleExcState> out;
    out.reserve(times.size());
    SingleExcState current = state;
    double t_now = 0.0;
    for (double t : times) {
        if (t < t_now) throw std::invalid_argument("evolve_samples: times must be non-decreasing");
        current = evolve(spec, current, t - t_now, dt);
        t_now = t;
        out.push_back(current);
    }
    return out;
}

double mode_rate(const ChainSpec& spec, int m)
{
    require_label(spec, m, "mode_rate");
    const int q = label_to_q(m, spec.n_sites);
    const double s = std::sin(std::numbers::pi * q / (2.0 * spec.n_sites));
    return 4.0 * spec.gamma * s * s;
}

double eigenvalue(const ChainSpec& spec, int m, int n)
{
    require_label(spec, m, "eigenvalue");
    require_label(spec, n, "eigenvalue");
    return mode_rate(spec, m) + mode_rate(spec, n);
}

Eigen::VectorXd basis_vector(const ChainSpec& spec, int l)
{
    require_label(spec, l, "basis_vector");
    const int n = spec.n_sites;
    const int q = label_to_q(l, n);
    const double scale = std::sqrt((q == 0 ? 1.0 : 2.0) / n);
    Eigen::VectorXd v(n);
    for (int k = 1; k <= n; ++k) v(k - 1) = scale * std::cos(std::numbers::pi * q * (k - 0.5) / n);
    return v;
}

Eigen::MatrixXd mode_matrix(const ChainSpec& spec)
{
    const int n = spec.n_sites;
    Eigen::MatrixXd phi(n, n);
    for (int l = 1; l <= n; ++l) phi.col(l - 1) = basis_vector(spec, l);
    return phi;
}

SpectralSolution::SpectralSolution(ChainSpec spec, Eigen::MatrixXd modes, Eigen::VectorXd rates,
                                   Eigen::MatrixXcd coeff, Eigen::VectorXcd coh_coeff, double sector_weight)
    : spec_(spec),
      modes_(std::move(modes)),
      rates_(std::move(rates)),
      coeff_(std::move(coeff)),
      coh_coeff_(std::move(coh_coeff)),
      sector_weight_(sector_weight)
{
}

cplx SpectralSolution::alpha(int k, int l, int m, int n) const
{
    require_label(spec_, k, "alpha");
    require_label(spec_, l, "alpha");
    require_label(spec_, m, "alpha");
    require_label(spec_, n, "alpha");
    return modes_(k - 1, m - 1) * modes_(l - 1, n - 1) * coeff_(m - 1, n - 1);
}

SpectralSolution spectral_solve(const ChainSpec& spec, const SingleExcState& initial)
{
    spec.validate();
    require_dims(spec, initial);
    const int n = spec.n_sites;
    Eigen::MatrixXd phi = mode_matrix(spec);
    Eigen::VectorXd rates(n);
    for (int l = 1; l <= n; ++l) rates(l - 1) = mode_rate(spec, l);
    const Eigen::MatrixXcd phic = phi.cast<cplx>();
    Eigen::MatrixXcd coeff = phic.transpose() * initial.rho * phic;
    Eigen::VectorXcd coh_coeff = phic.transpose() * initial.coh;
    const double weight = initial.rho.trace().real() + initial.vac;
    return SpectralSolution(spec, std::move(phi), std::move(rates), std::move(coeff), std::move(coh_coeff), weight);
}

SingleExcState spectral_eval(const SpectralSolution& sol, double t)
{
    if (t < 0.0) throw std::invalid_argument("spectral_eval: t must be >= 0");
    const Eigen::ArrayXd decay = (-sol.rates().array() * t).exp();
    const Eigen::MatrixXcd damped =
        (sol.coefficients().array() * (decay.matrix() * decay.matrix().transpose()).array().cast<cplx>()).matrix();
    const Eigen::MatrixXcd phic = sol.modes().cast<cplx>();
    SingleExcState s;
    s.rho = phic * damped * phic.transpose();
    s.coh = phic * (sol.coherence_coefficients().array() * decay.cast<cplx>()).matrix();
    s.vac = sol.sector_weight() - s.rho.trace().real();
    return s;
}

cplx spectral_element(const SpectralSolution& sol, int k, int l, double t)
{
    require_label(sol.spec(), k, "spectral_element");
    require_label(sol.spec(), l, "spectral_element");
    const Eigen::ArrayXd decay = (-sol.rates().array() * t).exp();
    const Eigen::VectorXcd a = (sol.modes().row(k - 1).transpose().array() * decay).cast<cplx>().matrix();
    const Eigen::VectorXcd b = (sol.modes().row(l - 1).transpose().array() * decay).cast<cplx>().matrix();
    return a.transpose() * sol.coefficients() * b;
}

double spectral_total_population(const SpectralSolution& sol, double t)
{
    const Eigen::ArrayXd decay2 = (-2.0 * sol.rates().array() * t).exp();
    return (sol.coefficients().diagonal().real().array() * decay2).sum();
}

Eigen::MatrixXcd propagate_block(const Eigen::MatrixXcd& block, const ChainSpec& rows, const ChainSpec& cols,
                                 double t)
{
    if (block.rows() != rows.n_sites || block.cols() != cols.n_sites) {
        throw std::invalid_argument("propagate_block: block shape does not match chains");
    }
    const Eigen::MatrixXcd pr = mode_matrix(rows).cast<cplx>();
    const Eigen::MatrixXcd pc = mode_matrix(cols).cast<cplx>();
    Eigen::VectorXd dr(rows.n_sites), dc(cols.n_sites);
    for (int l = 1; l <= rows.n_sites; ++l) dr(l - 1) = std::exp(-mode_rate(rows, l) * t);
    for (int l = 1; l <= cols.n_sites; ++l) dc(l - 1) = std::exp(-mode_rate(cols, l) * t);
    Eigen::MatrixXcd c = pr.transpose() * block * pc;
    c = (c.array() * (dr * dc.transpose()).array().cast<cplx>()).matrix();
    return pr * c * pc.transpose();
}

ConservedSums conserved_sums(const SingleExcState& state) { return {state.rho.sum(), state.coh.sum()}; }

double site_population(const SingleExcState& state, int k)
{
    if (k < 1 || k > state.n_sites()) throw std::out_of_range("site_population: index out of range");
    return state.rho(k - 1, k - 1).real();
}

double total_population(const SingleExcState& state) { return state.rho.trace().real(); }

std::vector<Triplet> single_generator_triplets(const ChainSpec& spec)
{
    spec.validate();
    const long n = spec.n_sites;
    const BondRates r = bond_rates(spec);
    std::vector<Triplet> out;
    for (long l = 0; l < n; ++l) {
        for (long k = 0; k < n; ++k) {
            const long row = k + n * l;
            out.push_back({row, row, -(r.right[k] + r.left[k] + r.right[l] + r.left[l])});
            if (k + 1 < n && r.right[k] > 0) out.push_back({row, (k + 1) + n * l, r.right[k]});
            if (k > 0 && r.left[k] > 0) out.push_back({row, (k - 1) + n * l, r.left[k]});
            if (l + 1 < n && r.right[l] > 0) out.push_back({row, k + n * (l + 1), r.right[l]});
            if (l > 0 && r.left[l] > 0) out.push_back({row, k + n * (l - 1), r.left[l]});
        }
    }
    return out;
}

} // namespace dissichain
