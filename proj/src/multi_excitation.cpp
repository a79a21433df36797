// multi_excitation.cpp: m-excitation generator, evolution, chain joining

#include "dissichain/multi_excitation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>
#include <string>

#include "dissichain/errors.hpp"
#include "dissichain/rk4.hpp"

namespace dissichain {

namespace {

void enumerate(int n, int m, int start, std::vector<int>& current, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(current.size()) == m) {
        out.push_back(current);
        return;
    }
    const int remaining = m - static_cast<int>(current.size());
    for (int s = start; s <= n - remaining + 1; ++s) {
        current.push_back(s);
        enumerate(n, m, s + 1, current, out);
        current.pop_back();
    }
}

void require_basis(const MultiExcState& s)
{
    if (!s.basis) throw std::invalid_argument("MultiExcState without basis");
    const auto d = static_cast<Eigen::Index>(s.basis->size());
    if (s.rho.rows() != d || s.rho.cols() != d) throw std::invalid_argument("MultiExcState shape mismatch");
}

// Site-relaxation rate gamma_k + gamma_{k-1} summed over a configuration.
double configuration_rate(const ChainSpec& spec, const std::vector<int>& tuple)
{
    double r = 0.0;
    for (int k : tuple) r += gamma_profile(spec, k) + gamma_profile(spec, k - 1);
    return r;
}

// Configurations reachable by moving one excitation to a free neighbour,
// with the rate of the reservoir crossed.
std::vector<std::pair<std::size_t, double>> hops(const ChainSpec& spec, const MultiBasis& basis,
                                                 const std::vector<int>& tuple)
{
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        for (int step : {+1, -1}) {
            const int target = tuple[i] + step;
            const double rate = gamma_profile(spec, std::min(tuple[i], target));
            if (rate == 0.0) continue;
            if (std::find(tuple.begin(), tuple.end(), target) != tuple.end()) continue;
            std::vector<int> moved = tuple;
            moved[i] = target;
            const auto idx = basis.index_of(moved);
            if (!idx) throw std::logic_error("hop produced a configuration outside the basis");
            out.emplace_back(*idx, rate);
        }
    }
    return out;
}

} // namespace

MultiBasis::MultiBasis(int n_sites, int m) : n_sites_(n_sites), m_(m)
{
    if (n_sites < 1) throw std::invalid_argument("MultiBasis: n_sites must be >= 1");
    if (m < 1 || m > n_sites) throw std::out_of_range("MultiBasis: m must lie in [1, n_sites]");
    std::vector<int> current;
    enumerate(n_sites, m, 1, current, tuples_);
    for (std::size_t i = 0; i < tuples_.size(); ++i) index_.emplace(tuples_[i], i);
}

std::optional<std::size_t> MultiBasis::index_of(const std::vector<int>& tuple) const
{
    const auto it = index_.find(tuple);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double binomial_count(int n, int m)
{
    if (m < 0 || m > n) return 0.0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0)));
}

MultiExcState multi_pure_state(std::shared_ptr<const MultiBasis> basis,
                               const std::vector<std::pair<std::vector<int>, cplx>>& components)
{
    if (!basis) throw std::invalid_argument("multi_pure_state: null basis");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    for (const auto& [tuple, amp] : components) {
        std::vector<int> sorted = tuple;
        std::sort(sorted.begin(), sorted.end());
        const auto idx = basis->index_of(sorted);
        if (!idx) throw std::out_of_range("multi_pure_state: configuration not in basis");
        psi(static_cast<Eigen::Index>(*idx)) += amp;
    }
    const double norm = psi.norm();
    if (norm == 0.0) throw std::invalid_argument("multi_pure_state: zero state");
    psi /= norm;
    return MultiExcState{std::move(basis), psi * psi.adjoint()};
}

kernels::CsrMatrix SparseGenerator::to_csr() const
{
    kernels::CsrMatrix a;
    a.rows = dimension;
    a.cols = dimension;
    a.row_ptr.assign(static_cast<std::size_t>(dimension) + 1, 0);
    for (const auto& e : entries) ++a.row_ptr[static_cast<std::size_t>(e.row) + 1];
    for (std::size_t i = 0; i < static_cast<std::size_t>(dimension); ++i) a.row_ptr[i + 1] += a.row_ptr[i];
    a.col_idx.resize(entries.size());
    a.values.resize(entries.size());
    std::vector<std::int64_t> fill(a.row_ptr.begin(), a.row_ptr.end() - 1);
    for (const auto& e : entries) {
        const auto p = fill[static_cast<std::size_t>(e.row)]++;
        a.col_idx[p] = e.col;
        a.values[p] = e.value;
    }
    return a;
}

SparseGenerator build_generator(const ChainSpec& spec, int m)
{
    spec.validate();
    if (m < 1 || m > spec.n_sites) throw std::out_of_range("build_generator: m must lie in [1, n_sites]");
    const double count = binomial_count(spec.n_sites, m);
    if (count * count > static_cast<double>(kMaxGeneratorDimension)) {
        throw GuardError("build_generator: basis too large (" + std::to_string(static_cast<long long>(count)) +
                         "^2 elements exceeds " + std::to_string(kMaxGeneratorDimension) + ")");
    }
    const MultiBasis basis(spec.n_sites, m);
    const auto d = static_cast<long>(basis.size());

    std::vector<double> rate(basis.size());
    std::vector<std::vector<std::pair<std::size_t, double>>> moves(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        rate[i] = configuration_rate(spec, basis.tuple(i));
        moves[i] = hops(spec, basis, basis.tuple(i));
    }

    SparseGenerator gen;
    gen.block_size = d;
    gen.dimension = static_cast<std::int64_t>(d) * d;
    gen.gamma = spec.gamma;
    for (long l = 0; l < d; ++l) {
        for (long k = 0; k < d; ++k) {
            const long row = k + d * l;
            gen.entries.push_back({row, row, -(rate[k] + rate[l])});
            for (const auto& [target, r] : moves[k]) gen.entries.push_back({row, static_cast<long>(target) + d * l, r});
            for (const auto& [target, r] : moves[l]) gen.entries.push_back({row, k + d * static_cast<long>(target), r});
        }
    }
    return gen;
}

Eigen::MatrixXcd apply_generator(const SparseGenerator& gen, const MultiExcState& state)
{
    require_basis(state);
    if (static_cast<std::int64_t>(state.basis->size()) != gen.block_size) {
        throw std::invalid_argument("apply_generator: basis size mismatch");
    }
    const auto csr = gen.to_csr();
    Eigen::MatrixXcd out(state.rho.rows(), state.rho.cols());
    kernels::csr_matvec(csr, {state.rho.data(), static_cast<std::size_t>(state.rho.size())},
                        {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

MultiExcState evolve_multi(const ChainSpec& spec, const MultiExcState& state, double t_end, double dt)
{
    spec.validate();
    require_basis(state);
    if (state.basis->n_sites() != spec.n_sites) throw std::invalid_argument("evolve_multi: basis/chain mismatch");
    if (t_end < 0.0) throw std::invalid_argument("evolve_multi: t_end must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_multi: dt must be > 0");
    if (dt * spec.gamma > 0.1 + 1e-12) {
        throw GuardError("evolve_multi: step too large, dt*gamma = " + std::to_string(dt * spec.gamma) + " > 0.1");
    }
    if (t_end == 0.0) return state;

    const auto csr = build_generator(spec, state.basis->m()).to_csr();
    const Eigen::Index d = state.rho.rows();
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(state.rho.data(), d * d);
    rk4_integrate(y, t_end, dt, [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        kernels::csr_matvec(csr, {in.data(), static_cast<std::size_t>(in.size())},
                            {out.data(), static_cast<std::size_t>(out.size())});
    });
    return MultiExcState{state.basis, Eigen::Map<const Eigen::MatrixXcd>(y.data(), d, d)};
}

cplx coherence_sum_multi(const MultiExcState& state)
{
    require_basis(state);
    return state.rho.sum();
}

void dump_generator(std::ostream& os, const SparseGenerator& gen)
{
    os << "row,col,coeff_over_gamma\n";
    for (const auto& e : gen.entries) {
        os << e.row << ',' << e.col << ',' << std::setprecision(17) << e.value / gen.gamma << '\n';
    }
}

Eigen::VectorXd site_occupation(const MultiExcState& state)
{
    require_basis(state);
    Eigen::VectorXd occ = Eigen::VectorXd::Zero(state.basis->n_sites());
    for (std::size_t i = 0; i < state.basis->size(); ++i) {
        const double p = state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        for (int site : state.basis->tuple(i)) occ(site - 1) += p;
    }
    return occ;
}

Eigen::MatrixXd pair_occupation(const MultiExcState& state)
{
    require_basis(state);
    if (state.basis->m() != 2) throw std::invalid_argument("pair_occupation: needs a two-excitation basis");
    const int n = state.basis->n_sites();
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < state.basis->size(); ++i) {
        const auto& t = state.basis->tuple(i);
        const double p = state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        table(t[0] - 1, t[1] - 1) = p;
        table(t[1] - 1, t[0] - 1) = p;
    }
    return table;
}

namespace {

double residual_norm(const ChainSpec& spec, const SingleExcState& s)
{
    return rhs_single(spec, s).rho.cwiseAbs().maxCoeff();
}

} // namespace

JoinReport join_chains(const ChainSpec& spec_a, double W_a, const ChainSpec& spec_b, double W_b, double t_relax)
{
    spec_a.validate();
    spec_b.validate();
    if (spec_a.gamma != spec_b.gamma) throw std::invalid_argument("join_chains: chains must share gamma");
    const int M = spec_a.n_sites;
    const int N = spec_b.n_sites;
    if (!(W_a >= 0.0 && W_a <= M) || !(W_b >= 0.0 && W_b <= N)) {
        throw std::invalid_argument("join_chains: W must lie in [0, n_sites] for each chain");
    }

    const ChainSpec joined = make_chain(M + N, spec_a.gamma, spec_a.lattice_a);
    SingleExcState init = SingleExcState::zero(M + N);
    // <1_k|rho_A (x) rho_B|1_l> keeps the other chain in its vacuum.
    const double vac_a = 1.0 - W_a / M;
    const double vac_b = 1.0 - W_b / N;
    init.rho.topLeftCorner(M, M).setConstant(W_a / (static_cast<double>(M) * M) * vac_b);
    init.rho.bottomRightCorner(N, N).setConstant(W_b / (static_cast<double>(N) * N) * vac_a);
    init.vac = 1.0 - init.rho.trace().real();

    JoinReport report;
    report.W_a = W_a;
    report.W_b = W_b;
    report.W_initial_block = init.rho.sum().real();
    report.two_excitation_weight = (W_a / M) * (W_b / N);

    const SpectralSolution sol = spectral_solve(joined, init);
    SingleExcState relaxed;
    double t = t_relax;
    if (t > 0.0) {
        relaxed = spectral_eval(sol, t);
        report.residual = residual_norm(joined, relaxed);
        if (report.residual >= kRelaxResidual) {
            throw GuardError("join_chains: relaxation time too short, residual " + std::to_string(report.residual));
        }
    } else {
        t = 10.0 / mode_rate(joined, 1);
        for (int attempt = 0;; ++attempt) {
            relaxed = spectral_eval(sol, t);
            report.residual = residual_norm(joined, relaxed);
            if (report.residual < kRelaxResidual) break;
            if (attempt == 60) throw GuardError("join_chains: relaxation did not converge");
            t *= 2.0;
        }
    }
    report.t_relax = t;
    report.W_joined = relaxed.rho.sum().real();
    report.uniform_element = report.W_joined / (static_cast<double>(M + N) * (M + N));

    // Split: remove the joining reservoir and let each part settle.
    const Eigen::MatrixXcd aa = propagate_block(relaxed.rho.topLeftCorner(M, M), spec_a, spec_a, t);
    const Eigen::MatrixXcd bb = propagate_block(relaxed.rho.bottomRightCorner(N, N), spec_b, spec_b, t);
    auto deviation = [&](const Eigen::MatrixXcd& block) {
        if (report.uniform_element == 0.0) return block.cwiseAbs().maxCoeff();
        return (block.array() - report.uniform_element).abs().maxCoeff() / report.uniform_element;
    };
    report.split_deviation_a = deviation(aa);
    report.split_deviation_b = deviation(bb);
    return report;
}

} // namespace dissichain
