// multi_excitation.hpp: Generator and evolution of the m-excitation block; chain joining
//
// Matrix elements <K|rho|L> between m-excitation configurations K, L (strictly
// increasing site tuples) obey a 2m-dimensional random walk: each excitation
// hops to a free neighbouring site at the reservoir rate, and the diagonal
// rate is sum over excitations of (gamma_k + gamma_{k-1}) on both sides.
// A hop onto an occupied site has no target, which is where loss enters.
// The feeding from the (m+1)-excitation block is not part of this generator;
// it is exact for the highest populated block.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dissichain/chain.hpp"
#include "dissichain/kernels.hpp"
#include "dissichain/single_excitation.hpp"

namespace dissichain {

class MultiBasis {
public:
    // All strictly increasing m-tuples of sites 1..n_sites in lexicographic order.
    MultiBasis(int n_sites, int m);

    int n_sites() const { return n_sites_; }
    int m() const { return m_; }
    std::size_t size() const { return tuples_.size(); }

    const std::vector<int>& tuple(std::size_t i) const { return tuples_.at(i); }
    const std::vector<std::vector<int>>& tuples() const { return tuples_; }
    std::optional<std::size_t> index_of(const std::vector<int>& tuple) const;

private:
    int n_sites_;
    int m_;
    std::vector<std::vector<int>> tuples_;
    std::map<std::vector<int>, std::size_t> index_;
};

// Number of m-subsets of n sites, as double to survive large arguments.
double binomial_count(int n, int m);

struct MultiExcState {
    std::shared_ptr<const MultiBasis> basis;
    Eigen::MatrixXcd rho;  // (index_of(K), index_of(L)) = <K|rho|L>
};

// Pure state sum_t c_t |K_t>, normalized.
MultiExcState multi_pure_state(std::shared_ptr<const MultiBasis> basis,
                               const std::vector<std::pair<std::vector<int>, cplx>>& components);

// Acts on the column-major vectorization of rho: index(K) + size * index(L).
struct SparseGenerator {
    std::int64_t dimension{0};  // size^2
    std::int64_t block_size{0}; // C(n_sites, m)
    double gamma{1.0};
    std::vector<Triplet> entries;

    kernels::CsrMatrix to_csr() const;
};

// Largest admissible generator dimension (size^2).
inline constexpr std::int64_t kMaxGeneratorDimension = 4'000'000;

SparseGenerator build_generator(const ChainSpec& spec, int m);

// d rho / dt for a state of matching basis.
Eigen::MatrixXcd apply_generator(const SparseGenerator& gen, const MultiExcState& state);

MultiExcState evolve_multi(const ChainSpec& spec, const MultiExcState& state, double t_end, double dt);

cplx coherence_sum_multi(const MultiExcState& state);

// "row,col,coeff_over_gamma" lines.
void dump_generator(std::ostream& os, const SparseGenerator& gen);

// Mean number of excitations on each site, sum over K containing k of <K|rho|K>.
Eigen::VectorXd site_occupation(const MultiExcState& state);

// Site x site table of <K|rho|K> for two-excitation K = {i, j}, symmetric,
// zero diagonal. Throws unless basis m == 2.
Eigen::MatrixXd pair_occupation(const MultiExcState& state);

struct JoinReport {
    double W_a{0.0};
    double W_b{0.0};
    double W_initial_block{0.0};     // single-excitation W of rho_A (x) rho_B
    double two_excitation_weight{0.0}; // W_a W_b / (M N), outside the block
    double W_joined{0.0};
    double t_relax{0.0};
    double residual{0.0};            // sup-norm of d rho/dt at t_relax
    double uniform_element{0.0};     // W_joined / (M + N)^2
    double split_deviation_a{0.0};   // max relative deviation after re-split
    double split_deviation_b{0.0};
};

// Relaxation threshold on the sup-norm of the derivative.
inline constexpr double kRelaxResidual = 1e-10;

// Joins the last site of A to the first site of B through one reservoir at
// rate gamma (A and B must share gamma), relaxes the compound single-
// excitation block, then splits again and relaxes each part. t_relax <= 0
// selects the time automatically; an explicit t_relax that leaves a residual
// >= kRelaxResidual raises GuardError.
JoinReport join_chains(const ChainSpec& spec_a, double W_a, const ChainSpec& spec_b, double W_b,
                       double t_relax = 0.0);

} // namespace dissichain
