// lindblad_oracle.cpp: Full master-equation evolution for small chains

#include "dissichain/lindblad_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "dissichain/errors.hpp"
#include "dissichain/rk4.hpp"
#include "dissichain/single_excitation.hpp"

namespace dissichain::oracle {

namespace {

constexpr cplx kI{0.0, 1.0};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

SparseOp to_sparse(const Eigen::MatrixXcd& m)
{
    SparseOp s = m.sparseView();
    s.makeCompressed();
    return s;
}

Eigen::Index single_index(int site) { return Eigen::Index{1} << (site - 1); }

void require_chain_size(int n_sites, int limit, const char* what)
{
    if (n_sites < 1 || n_sites > limit) {
        throw GuardError(std::string(what) + ": oracle limited to " + std::to_string(limit) + " sites, got " +
                         std::to_string(n_sites));
    }
}

void require_state(const DenseState& s, int n_sites)
{
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    if (s.n_sites != n_sites || s.rho.rows() != dim || s.rho.cols() != dim) {
        throw std::invalid_argument("DenseState does not match model size");
    }
}

// Up to this Hilbert dimension the superoperator is formed explicitly.
constexpr Eigen::Index kStepMatrixMaxDim = 16;

} // namespace

std::vector<int> BipartiteSpec::chain_positions() const
{
    std::vector<int> out;
    for (int i = 0; i < total_sites(); ++i) {
        if (!lossy[static_cast<std::size_t>(i)]) out.push_back(i + 1);
    }
    return out;
}

void BipartiteSpec::validate() const
{
    if (!(g >= 0.0) || !(Gamma >= 0.0) || !(std::max(g, Gamma) > 0.0)) {
        throw std::invalid_argument("BipartiteSpec: need g >= 0, Gamma >= 0, not both zero");
    }
    if (static_cast<int>(chain_positions().size()) != n_chain_sites) {
        throw std::invalid_argument("BipartiteSpec: lossy mask does not leave n_chain_sites chain sites");
    }
    require_chain_size(total_sites(), kMaxBipartiteSites, "apply_bipartite");
}

BipartiteSpec alternating_bipartite(int n_chain_sites, double g, double Gamma)
{
    if (n_chain_sites < 1) throw std::invalid_argument("alternating_bipartite: need at least one chain site");
    BipartiteSpec spec;
    spec.n_chain_sites = n_chain_sites;
    spec.g = g;
    spec.Gamma = Gamma;
    const int total = 2 * n_chain_sites - 1;
    spec.lossy.resize(static_cast<std::size_t>(total));
    for (int pos = 1; pos <= total; ++pos) spec.lossy[static_cast<std::size_t>(pos - 1)] = (pos % 2 == 0);
    return spec;
}

Eigen::MatrixXcd site_operator(const Eigen::Matrix2cd& local, int site, int n_sites)
{
    if (site < 1 || site > n_sites) throw std::out_of_range("site_operator: site out of range");
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
    // Most significant factor first: site n_sites ... site 1.
    for (int s = n_sites; s >= 1; --s) {
        op = kron(op, s == site ? Eigen::MatrixXcd(local) : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(2, 2)));
    }
    return op;
}

Eigen::MatrixXcd lowering(int site, int n_sites)
{
    Eigen::Matrix2cd sm = Eigen::Matrix2cd::Zero();
    sm(0, 1) = 1.0;  // |ground><excited|
    return site_operator(sm, site, n_sites);
}

MasterEquation::MasterEquation(int n_sites, SparseOp hamiltonian, std::vector<SparseOp> jumps,
                               std::vector<double> rates, double rate_scale)
    : n_sites_(n_sites),
      hamiltonian_(std::move(hamiltonian)),
      jumps_(std::move(jumps)),
      rates_(std::move(rates)),
      rate_scale_(rate_scale)
{
    if (jumps_.size() != rates_.size()) throw std::invalid_argument("MasterEquation: jumps/rates size mismatch");
    const Eigen::Index dim = Eigen::Index{1} << n_sites_;
    decay_ = SparseOp(dim, dim);
    for (std::size_t j = 0; j < jumps_.size(); ++j) {
        SparseOp adj = jumps_[j].adjoint();
        decay_ += rates_[j] * (adj * jumps_[j]);
        jumps_adj_.push_back(std::move(adj));
    }
    decay_.makeCompressed();
    if (dim <= kSuperoperatorMaxDim) {
        // Column-major vec: vec(A rho B) = (B^T (x) A) vec(rho).
        SparseOp id(dim, dim);
        id.setIdentity();
        superop_ = -Eigen::kroneckerProduct(id, decay_).eval() - Eigen::kroneckerProduct(SparseOp(decay_.transpose()), id).eval();
        for (std::size_t j = 0; j < jumps_.size(); ++j) {
            if (rates_[j] == 0.0) continue;
            superop_ += (2.0 * rates_[j]) * Eigen::kroneckerProduct(SparseOp(jumps_[j].conjugate()), jumps_[j]).eval();
        }
        if (hamiltonian_.nonZeros() > 0) {
            superop_ += -kI * (Eigen::kroneckerProduct(id, hamiltonian_).eval() -
                               Eigen::kroneckerProduct(SparseOp(hamiltonian_.transpose()), id).eval());
        }
        superop_.prune(cplx(0.0, 0.0));
        superop_.makeCompressed();
    }
}

Eigen::MatrixXcd MasterEquation::apply(const Eigen::MatrixXcd& rho) const
{
    if (superop_.rows() > 0) {
        Eigen::MatrixXcd out(rho.rows(), rho.cols());
        Eigen::Map<Eigen::VectorXcd>(out.data(), out.size()).noalias() =
            superop_ * Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
        return out;
    }
    Eigen::MatrixXcd out = -(decay_ * rho);
    out -= (decay_ * rho.adjoint()).adjoint();  // rho * decay, decay Hermitian
    for (std::size_t j = 0; j < jumps_.size(); ++j) {
        if (rates_[j] == 0.0) continue;
        const Eigen::MatrixXcd lr = jumps_[j] * rho;
        out += (2.0 * rates_[j]) * (jumps_[j] * lr.adjoint()).adjoint();
    }
    if (hamiltonian_.nonZeros() > 0) {
        const Eigen::MatrixXcd hr = hamiltonian_ * rho;
        out += -kI * (hr - (hamiltonian_ * rho.adjoint()).adjoint());
    }
    return out;
}

MasterEquation chain_master_equation(const ChainSpec& spec)
{
    spec.validate();
    require_chain_size(spec.n_sites, kMaxChainSites, "apply_lindblad");
    const int n = spec.n_sites;
    std::vector<SparseOp> jumps;
    std::vector<double> rates;
    for (int j = 1; j <= n - 1; ++j) {
        jumps.push_back(to_sparse(lowering(j, n) - lowering(j + 1, n)));
        rates.push_back(gamma_profile(spec, j));
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    return MasterEquation(n, SparseOp(dim, dim), std::move(jumps), std::move(rates), spec.gamma);
}

MasterEquation bipartite_master_equation(const BipartiteSpec& spec)
{
    spec.validate();
    const int n = spec.total_sites();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int l = 1; l <= n - 1; ++l) {
        const Eigen::MatrixXcd sl = lowering(l, n);
        const Eigen::MatrixXcd sn = lowering(l + 1, n);
        h += kI * spec.g * (sn.adjoint() * sl - sl.adjoint() * sn);
    }
    std::vector<SparseOp> jumps;
    std::vector<double> rates;
    for (int pos = 1; pos <= n; ++pos) {
        if (!spec.lossy[static_cast<std::size_t>(pos - 1)]) continue;
        jumps.push_back(to_sparse(lowering(pos, n)));
        rates.push_back(spec.Gamma);
    }
    return MasterEquation(n, to_sparse(h), std::move(jumps), std::move(rates), std::max(spec.g, spec.Gamma));
}

DenseState apply_lindblad(const ChainSpec& spec, const DenseState& state)
{
    const MasterEquation eq = chain_master_equation(spec);
    require_state(state, spec.n_sites);
    return DenseState{state.n_sites, eq.apply(state.rho)};
}

DenseState apply_bipartite(const BipartiteSpec& spec, const DenseState& state)
{
    const MasterEquation eq = bipartite_master_equation(spec);
    require_state(state, spec.total_sites());
    return DenseState{state.n_sites, eq.apply(state.rho)};
}

namespace {

// One classical RK4 step of a linear autonomous system is the matrix
// polynomial I + hS + (hS)^2/2 + (hS)^3/6 + (hS)^4/24 of its superoperator S.
// Forming it once and raising it to the step count by squaring gives the same
// integrator at a fraction of the cost when the step rule forces many steps.
Eigen::MatrixXcd rk4_step_power(const MasterEquation& eq, Eigen::Index dim, double h, std::int64_t steps)
{
    const Eigen::Index d2 = dim * dim;
    Eigen::MatrixXcd S(d2, d2);
    for (Eigen::Index c = 0; c < d2; ++c) {
        Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(dim, dim);
        unit(c % dim, c / dim) = 1.0;
        const Eigen::MatrixXcd col = eq.apply(unit);
        S.col(c) = Eigen::Map<const Eigen::VectorXcd>(col.data(), d2);
    }
    const Eigen::MatrixXcd hS = h * S;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d2, d2);
    Eigen::MatrixXcd step = id + hS * (id + hS * (id / 2.0 + hS * (id / 6.0 + hS / 24.0)));

    Eigen::MatrixXcd result = id;
    for (std::int64_t k = steps; k > 0; k >>= 1) {
        if (k & 1) result = step * result;
        if (k > 1) step = step * step;
    }
    return result;
}

} // namespace

DenseState evolve_dense(const MasterEquation& eq, const DenseState& state, double t_end, double dt)
{
    require_state(state, eq.n_sites());
    if (t_end < 0.0) throw std::invalid_argument("evolve_dense: t_end must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_dense: dt must be > 0");
    if (dt * eq.rate_scale() > 0.05 + 1e-12) {
        throw GuardError("evolve_dense: step too large, dt*rate = " + std::to_string(dt * eq.rate_scale()) +
                         " > 0.05");
    }
    if (t_end == 0.0) return state;
    const Eigen::Index dim = state.dim();
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(state.rho.data(), dim * dim);
    if (dim <= kStepMatrixMaxDim) {
        const auto steps = step_count(t_end, dt);
        y = rk4_step_power(eq, dim, t_end / static_cast<double>(steps), steps) * y;
    } else {
        rk4_integrate(y, t_end, dt, [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
            const Eigen::Map<const Eigen::MatrixXcd> rho(in.data(), dim, dim);
            Eigen::Map<Eigen::MatrixXcd>(out.data(), dim, dim) = eq.apply(rho);
        });
    }
    return DenseState{state.n_sites, Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim)};
}

std::vector<DenseState> evolve_dense_samples(const MasterEquation& eq, const DenseState& state,
                                             std::span<const double> times, double dt, bool check)
{
    std::vector<DenseState> out;
    out.reserve(times.size());
    DenseState current = state;
    double t_now = 0.0;
    for (double t : times) {
        if (t < t_now) throw std::invalid_argument("evolve_dense_samples: times must be non-decreasing");
        current = evolve_dense(eq, current, t - t_now, dt);
        t_now = t;
        if (check) check_physical(current);
        out.push_back(current);
    }
    return out;
}

DenseState ground_state(int n_sites)
{
    require_chain_size(n_sites, kMaxChainSites, "ground_state");
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    DenseState s{n_sites, Eigen::MatrixXcd::Zero(dim, dim)};
    s.rho(0, 0) = 1.0;
    return s;
}

DenseState single_excitation_pure(int n_sites, std::span<const cplx> amplitudes, cplx vacuum)
{
    require_chain_size(n_sites, kMaxChainSites, "single_excitation_pure");
    if (static_cast<int>(amplitudes.size()) != n_sites) {
        throw std::invalid_argument("single_excitation_pure: need one amplitude per site");
    }
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = vacuum;
    for (int k = 1; k <= n_sites; ++k) psi(single_index(k)) = amplitudes[static_cast<std::size_t>(k - 1)];
    return DenseState{n_sites, psi * psi.adjoint()};
}

DenseState embed_single(const SingleExcState& s)
{
    const int n = s.n_sites();
    require_chain_size(n, kMaxChainSites, "embed_single");
    const Eigen::Index dim = Eigen::Index{1} << n;
    DenseState out{n, Eigen::MatrixXcd::Zero(dim, dim)};
    out.rho(0, 0) = s.vac;
    for (int k = 1; k <= n; ++k) {
        out.rho(single_index(k), 0) = s.coh(k - 1);
        out.rho(0, single_index(k)) = std::conj(s.coh(k - 1));
        for (int l = 1; l <= n; ++l) out.rho(single_index(k), single_index(l)) = s.rho(k - 1, l - 1);
    }
    return out;
}

namespace {

Eigen::Index config_index(const std::vector<int>& tuple)
{
    Eigen::Index idx = 0;
    for (int site : tuple) idx |= single_index(site);
    return idx;
}

} // namespace

DenseState embed_multi(const MultiExcState& s)
{
    if (!s.basis) throw std::invalid_argument("embed_multi: null basis");
    const int n = s.basis->n_sites();
    require_chain_size(n, kMaxChainSites, "embed_multi");
    const Eigen::Index dim = Eigen::Index{1} << n;
    DenseState out{n, Eigen::MatrixXcd::Zero(dim, dim)};
    for (std::size_t a = 0; a < s.basis->size(); ++a) {
        for (std::size_t b = 0; b < s.basis->size(); ++b) {
            out.rho(config_index(s.basis->tuple(a)), config_index(s.basis->tuple(b))) =
                s.rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
    }
    return out;
}

SingleExcState project_single_excitation(const DenseState& state)
{
    const int n = state.n_sites;
    SingleExcState s = SingleExcState::zero(n);
    s.vac = state.rho(0, 0).real();
    for (int k = 1; k <= n; ++k) {
        s.coh(k - 1) = state.rho(single_index(k), 0);
        for (int l = 1; l <= n; ++l) s.rho(k - 1, l - 1) = state.rho(single_index(k), single_index(l));
    }
    return s;
}

MultiExcState project_multi(const DenseState& state, std::shared_ptr<const MultiBasis> basis)
{
    if (!basis || basis->n_sites() != state.n_sites) throw std::invalid_argument("project_multi: basis mismatch");
    const auto d = static_cast<Eigen::Index>(basis->size());
    MultiExcState out{basis, Eigen::MatrixXcd::Zero(d, d)};
    for (Eigen::Index a = 0; a < d; ++a) {
        const Eigen::Index ia = config_index(basis->tuple(static_cast<std::size_t>(a)));
        for (Eigen::Index b = 0; b < d; ++b) {
            out.rho(a, b) = state.rho(ia, config_index(basis->tuple(static_cast<std::size_t>(b))));
        }
    }
    return out;
}

double excitation_number(const DenseState& state)
{
    double n = 0.0;
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        n += std::popcount(static_cast<unsigned long long>(i)) * state.rho(i, i).real();
    }
    return n;
}

double min_eigenvalue(const DenseState& state)
{
    const Eigen::MatrixXcd herm = 0.5 * (state.rho + state.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void check_physical(const DenseState& state, double tolerance)
{
    const double herm = (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
    const double trace = std::abs(state.rho.trace() - cplx{1.0, 0.0});
    const double lowest = min_eigenvalue(state);
    if (herm > 1e-10 || trace > 1e-10 || lowest < -tolerance) {
        std::ostringstream msg;
        msg << "oracle state not physical: hermiticity defect " << herm << ", trace defect " << trace
            << ", lowest eigenvalue " << lowest;
        throw GuardError(msg.str());
    }
}

double effective_gamma(double g, double Gamma)
{
    if (!(Gamma > 0.0)) throw std::invalid_argument("effective_gamma: Gamma must be > 0");
    return g * g / (2.0 * Gamma);
}

AdiabaticComparison compare_adiabatic(int n_chain_sites, double g, double Gamma, double gamma_eff, double horizon,
                                      int samples)
{
    if (!(gamma_eff > 0.0)) throw std::invalid_argument("compare_adiabatic: gamma_eff must be > 0");
    if (samples < 1) throw std::invalid_argument("compare_adiabatic: need at least one sample");
    const BipartiteSpec full = alternating_bipartite(n_chain_sites, g, Gamma);
    const MasterEquation eq = bipartite_master_equation(full);
    const auto positions = full.chain_positions();

    std::vector<cplx> amps(static_cast<std::size_t>(full.total_sites()), cplx{0.0, 0.0});
    amps[static_cast<std::size_t>(positions.front() - 1)] = 1.0;
    const DenseState start = single_excitation_pure(full.total_sites(), amps);

    const ChainSpec reduced = make_chain(n_chain_sites, gamma_eff);
    const SpectralSolution sol = spectral_solve(reduced, build_initial_single(reduced, init::SingleSite{1}));

    std::vector<double> times;
    for (int s = 1; s <= samples; ++s) times.push_back(horizon / gamma_eff * s / samples);
    const double dt = 0.05 / eq.rate_scale();
    const auto states = evolve_dense_samples(eq, start, times, dt, false);

    AdiabaticComparison cmp{gamma_eff, 0.0};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const SingleExcState proj = project_single_excitation(states[i]);
        const SingleExcState red = spectral_eval(sol, times[i]);
        for (int c = 0; c < n_chain_sites; ++c) {
            const int pos = positions[static_cast<std::size_t>(c)];
            const double diff = std::abs(proj.rho(pos - 1, pos - 1).real() - red.rho(c, c).real());
            cmp.mismatch = std::max(cmp.mismatch, diff);
        }
    }
    return cmp;
}

} // namespace dissichain::oracle
