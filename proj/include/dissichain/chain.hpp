// chain.hpp: Chain geometry, reservoir-rate profile and initial states

#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dissichain/state.hpp"

namespace dissichain {

using cplx = std::complex<double>;

// A homogeneous chain of n_sites two-level systems (sites 1..n_sites) with
// one shared reservoir per neighbouring pair, i.e. n_sites-1 reservoirs.
struct ChainSpec {
    int n_sites{2};
    double gamma{1.0};     // rate of every internal reservoir, 1/time
    double lattice_a{1.0}; // continuum length per site index

    // Throws std::invalid_argument unless n_sites >= 2, gamma > 0, lattice_a > 0.
    void validate() const;
};

ChainSpec make_chain(int n_sites, double gamma = 1.0, double lattice_a = 1.0);

// Rate of reservoir j, which couples sites j and j+1. Zero outside
// 1 <= j <= n_sites-1 (insulated chain ends).
double gamma_profile(const ChainSpec& spec, int j);

// Per-site rates to the right (gamma_k) and left (gamma_{k-1}) neighbour,
// 0-based storage: right[i] belongs to site i+1.
struct BondRates {
    std::vector<double> right;
    std::vector<double> left;
};
BondRates bond_rates(const ChainSpec& spec);

// f_i proportional to C(m, i), normalized to unit sum of squares. Signs are
// not applied here.
std::vector<double> binomial_amplitudes(int m);

namespace init {

struct SingleSite {
    int site{1};
};
struct EntangledPair {
    int site{1};   // pair (site, site+1)
    int sign{+1};  // +1 or -1
};
// sum_i (-1)^i f_i |1_{site+i}>, f from binomial_amplitudes(m)
struct Binomial {
    int site{1};
    int m{0};
};
// Arbitrary pure state: amplitudes over sites plus an optional vacuum
// amplitude. |vacuum|^2 + sum |amplitudes|^2 must equal 1.
struct Custom {
    std::vector<cplx> amplitudes;
    cplx vacuum{0.0, 0.0};
};
// (W/n)|Psi><Psi| + (1 - W/n)|0><0| with Psi the uniform superposition.
struct StationaryMixture {
    double W{0.0};
};

} // namespace init

using InitialStateSpec = std::variant<init::SingleSite, init::EntangledPair, init::Binomial,
                                      init::Custom, init::StationaryMixture>;

// Throws std::out_of_range / std::invalid_argument if init does not fit spec.
void validate_initial(const ChainSpec& spec, const InitialStateSpec& init);

// Site amplitudes (length n_sites) of a pure initial state, signs included.
// Empty for the stationary mixture, which is not pure.
std::vector<cplx> initial_amplitudes(const ChainSpec& spec, const InitialStateSpec& init);

SingleExcState build_initial_single(const ChainSpec& spec, const InitialStateSpec& init);

// Pure uniform superposition annihilated by every jump operator.
SingleExcState stationary_state(const ChainSpec& spec);

// JSON records: {"kind": "single_site", "site": 26}, {"kind": "entangled_pair",
// "site": 25, "sign": "-"}, {"kind": "binomial", "site": k, "m": m},
// {"kind": "custom", "amplitudes": [[re, im], ...], "vacuum": [re, im]},
// {"kind": "stationary_mixture", "W": 1.0}.
nlohmann::json to_json(const InitialStateSpec& init);
InitialStateSpec initial_from_json(const nlohmann::json& j);

} // namespace dissichain
