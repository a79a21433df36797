// lindblad_oracle.hpp: Brute-force density-matrix evolution on small chains
//
// Ground truth for the reduced engines. Operators are assembled from 2x2
// site blocks by Kronecker products (site 1 is the least significant bit of
// the basis index, a set bit means excited), then stored sparse for
// application. No symmetry reduction.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dissichain/chain.hpp"
#include "dissichain/multi_excitation.hpp"
#include "dissichain/state.hpp"

namespace dissichain::oracle {

inline constexpr int kMaxChainSites = 10;
inline constexpr int kMaxBipartiteSites = 9;
// Hilbert dimension up to which the generator is stored as one sparse
// superoperator.
inline constexpr Eigen::Index kSuperoperatorMaxDim = 64;

struct DenseState {
    int n_sites{0};
    Eigen::MatrixXcd rho;  // 2^n_sites square

    Eigen::Index dim() const { return rho.rows(); }
};

// Two-level chain with a coherent exchange coupling of strength g between
// every neighbouring pair and loss Gamma on the sites flagged in `lossy`.
struct BipartiteSpec {
    int n_chain_sites{2};
    double g{1.0};
    double Gamma{50.0};
    std::vector<bool> lossy;  // one flag per physical site, site 1 first

    int total_sites() const { return static_cast<int>(lossy.size()); }
    bool adiabatic() const { return Gamma / g >= 20.0; }
    // 1-based positions of the non-lossy sites.
    std::vector<int> chain_positions() const;
    void validate() const;
};

// Chain sites interleaved with lossy sites: TLS, lossy, TLS, ..., TLS.
BipartiteSpec alternating_bipartite(int n_chain_sites, double g, double Gamma);

using SparseOp = Eigen::SparseMatrix<cplx>;

// Dense 2^n x 2^n operator acting as `local` on site `site` (1-based).
Eigen::MatrixXcd site_operator(const Eigen::Matrix2cd& local, int site, int n_sites);
Eigen::MatrixXcd lowering(int site, int n_sites);

// Generator: -i[H, rho] + sum_j rate_j (2 L_j rho L_j^+ - rho L_j^+ L_j - L_j^+ L_j rho).
class MasterEquation {
public:
    MasterEquation(int n_sites, SparseOp hamiltonian, std::vector<SparseOp> jumps, std::vector<double> rates,
                   double rate_scale);

    int n_sites() const { return n_sites_; }
    double rate_scale() const { return rate_scale_; }
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

private:
    int n_sites_;
    SparseOp hamiltonian_;
    std::vector<SparseOp> jumps_;
    std::vector<SparseOp> jumps_adj_;
    std::vector<double> rates_;
    SparseOp decay_;  // sum_j rate_j L_j^+ L_j
    double rate_scale_;
    // Vectorized generator, built when the Hilbert space is small enough.
    SparseOp superop_;
};

// Jump operators sigma_j - sigma_{j+1} at gamma_profile(j). rate_scale = gamma.
MasterEquation chain_master_equation(const ChainSpec& spec);

// rate_scale = max(g, Gamma).
MasterEquation bipartite_master_equation(const BipartiteSpec& spec);

DenseState apply_lindblad(const ChainSpec& spec, const DenseState& state);
DenseState apply_bipartite(const BipartiteSpec& spec, const DenseState& state);

// Fixed-step RK4; rejects dt * rate_scale > 0.05 with GuardError.
DenseState evolve_dense(const MasterEquation& eq, const DenseState& state, double t_end, double dt);

// States at non-decreasing sample times. When check is set, every sample is
// verified physical (Hermitian, unit trace, eigenvalues >= -1e-8) and a
// GuardError is raised otherwise.
std::vector<DenseState> evolve_dense_samples(const MasterEquation& eq, const DenseState& state,
                                             std::span<const double> times, double dt, bool check = true);

DenseState ground_state(int n_sites);
// |psi><psi| with psi = vacuum * |0> + sum_k amplitudes[k-1] |1_k>.
DenseState single_excitation_pure(int n_sites, std::span<const cplx> amplitudes, cplx vacuum = {0.0, 0.0});
// Embeds all three single-excitation blocks.
DenseState embed_single(const SingleExcState& s);
// Embeds an m-excitation block.
DenseState embed_multi(const MultiExcState& s);

SingleExcState project_single_excitation(const DenseState& state);
MultiExcState project_multi(const DenseState& state, std::shared_ptr<const MultiBasis> basis);

double excitation_number(const DenseState& state);
double min_eigenvalue(const DenseState& state);
// Throws GuardError with a diagnostic if the state is not physical.
void check_physical(const DenseState& state, double tolerance = 1e-8);

// g^2 / (2 Gamma).
double effective_gamma(double g, double Gamma);

struct AdiabaticComparison {
    double gamma_eff{0.0};
    double mismatch{0.0};  // sup over samples and chain sites of |p_full - p_reduced|
};

// Excites the first chain site of alternating_bipartite(n_chain_sites, g, Gamma),
// evolves the full model and the reduced dissipative chain at gamma_eff,
// and compares chain-site populations over gamma_eff * t in [0, horizon].
AdiabaticComparison compare_adiabatic(int n_chain_sites, double g, double Gamma, double gamma_eff,
                                      double horizon = 3.0, int samples = 60);

} // namespace dissichain::oracle
