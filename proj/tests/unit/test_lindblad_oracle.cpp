// Brute-force density-matrix oracle and its agreement with the reduced engines.

#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"

#include "dissichain/errors.hpp"
#include "dissichain/lindblad_oracle.hpp"
#include "dissichain/multi_excitation.hpp"
#include "dissichain/single_excitation.hpp"

using namespace dissichain;
using namespace dissichain::oracle;

namespace {

double sup(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<cplx> random_amplitudes(std::mt19937_64& rng, int n, cplx& vacuum)
{
    std::normal_distribution<double> normal;
    std::vector<cplx> a(n);
    double norm = 0.0;
    for (auto& x : a) {
        x = {normal(rng), normal(rng)};
        norm += std::norm(x);
    }
    vacuum = {normal(rng), normal(rng)};
    norm += std::norm(vacuum);
    for (auto& x : a) x /= std::sqrt(norm);
    vacuum /= std::sqrt(norm);
    return a;
}

} // namespace

TEST_SUITE("lindblad_oracle") {

TEST_CASE("operator layout")
{
    const auto s1 = lowering(1, 2);
    CHECK(s1(0, 1) == cplx(1.0));
    CHECK(sup(s1) == 1.0);
    CHECK(sup(s1 * s1) == 0.0);
    const auto s2 = lowering(2, 2);
    CHECK(s2(0, 2) == cplx(1.0));
    CHECK(sup(s1 * s2 - s2 * s1) == 0.0);
}

TEST_CASE("ground and stationary states are fixed points")
{
    const ChainSpec spec = make_chain(5, 1.7);
    CHECK(sup(apply_lindblad(spec, ground_state(5)).rho) <= 1e-13);
    const DenseState stat = embed_single(stationary_state(spec));
    CHECK(sup(apply_lindblad(spec, stat).rho) <= 1e-13);
}

TEST_CASE("two sites: hand-evaluated derivatives")
{
    const double gamma = 0.8;
    const ChainSpec spec = make_chain(2, gamma);
    const DenseState s = single_excitation_pure(2, std::vector<cplx>{1.0, 0.0});
    const DenseState d = apply_lindblad(spec, s);
    // Site k sits at basis index 1 << (k-1).
    CHECK(d.rho(1, 1).real() == doctest::Approx(-2.0 * gamma));
    CHECK(d.rho(2, 2).real() == doctest::Approx(0.0));
    CHECK(d.rho(1, 2).real() == doctest::Approx(gamma));
    CHECK(d.rho(0, 0).real() == doctest::Approx(2.0 * gamma));

    const double r = 1.0 / std::sqrt(2.0);
    const DenseState dm = apply_lindblad(spec, single_excitation_pure(2, std::vector<cplx>{r, -r}));
    CHECK(dm.rho(0, 0).real() == doctest::Approx(4.0 * gamma));
    const DenseState dp = apply_lindblad(spec, single_excitation_pure(2, std::vector<cplx>{r, r}));
    CHECK(sup(dp.rho) < 1e-15);
}

TEST_CASE("bipartite limits")
{
    BipartiteSpec free = alternating_bipartite(2, 1.0, 0.0);
    CHECK(free.total_sites() == 3);
    CHECK(free.chain_positions() == std::vector<int>{1, 3});
    const DenseState s = single_excitation_pure(3, std::vector<cplx>{1.0, 0.0, 0.0});
    // Gamma = 0: unitary, trace and purity preserved.
    const auto out = evolve_dense(bipartite_master_equation(free), s, 2.0, 0.01);
    CHECK(out.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((out.rho * out.rho).trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    // Three-site hopping: P1 = cos^4(g t / sqrt 2).
    for (double t : {0.5, 1.0, 2.0}) {
        const auto x = evolve_dense(bipartite_master_equation(free), s, t, 0.01);
        CHECK(x.rho(1, 1).real() == doctest::Approx(std::pow(std::cos(t / std::sqrt(2.0)), 4)).epsilon(1e-8));
        CHECK(x.rho(4, 4).real() == doctest::Approx(std::pow(std::sin(t / std::sqrt(2.0)), 4)).epsilon(1e-8));
    }
    // g = 0: chain sites frozen, lossy site decays.
    const auto eq = bipartite_master_equation(alternating_bipartite(2, 0.0, 10.0));
    CHECK(sup(eq.apply(s.rho)) == 0.0);
    const DenseState lossy = single_excitation_pure(3, std::vector<cplx>{0.0, 1.0, 0.0});
    CHECK(eq.apply(lossy.rho)(2, 2).real() == doctest::Approx(-20.0));
    CHECK(effective_gamma(0.0, 50.0) == 0.0);
    CHECK(effective_gamma(1.0, 50.0) == doctest::Approx(0.01));
    CHECK(effective_gamma(2.0, 100.0) == doctest::Approx(0.02));
    CHECK(alternating_bipartite(2, 1.0, 50.0).adiabatic());
    CHECK_FALSE(alternating_bipartite(2, 1.0, 10.0).adiabatic());
}

TEST_CASE("trace, positivity and excitation number along evolution")
{
    const ChainSpec spec = make_chain(4);
    const auto eq = chain_master_equation(spec);
    DenseState s = ground_state(4);
    s.rho.setZero();
    s.rho(15, 15) = 1.0;  // all excited
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(0.3 * i);
    const auto samples = evolve_dense_samples(eq, s, times, 0.01, true);
    double previous = excitation_number(s);
    for (const auto& x : samples) {
        CHECK(std::abs(x.rho.trace().real() - 1.0) < 1e-12);
        CHECK(min_eigenvalue(x) > -1e-10);
        const double now = excitation_number(x);
        CHECK(now <= previous + 1e-12);
        previous = now;
    }
}

TEST_CASE("guards")
{
    CHECK_THROWS_AS(chain_master_equation(make_chain(kMaxChainSites + 1)), GuardError);
    const auto eq = chain_master_equation(make_chain(3));
    CHECK_THROWS_AS(evolve_dense(eq, ground_state(3), 1.0, 0.1), GuardError);
    DenseState bad = ground_state(2);
    bad.rho(0, 0) = 1.5;
    bad.rho(3, 3) = -0.5;
    CHECK_THROWS_AS(check_physical(bad), GuardError);
    CHECK_NOTHROW(check_physical(ground_state(2)));
}

TEST_CASE("embedding and projection round trip")
{
    std::mt19937_64 rng(7);
    cplx vac;
    const auto a = random_amplitudes(rng, 5, vac);
    const DenseState d = single_excitation_pure(5, a, vac);
    const SingleExcState s = project_single_excitation(d);
    CHECK(sup_distance(project_single_excitation(embed_single(s)), s) < 1e-15);
    CHECK(s.vac == doctest::Approx(std::norm(vac)));
    CHECK(std::abs(s.coh(2) - a[2] * std::conj(vac)) < 1e-15);

    auto basis = std::make_shared<const MultiBasis>(5, 2);
    const auto m = multi_pure_state(basis, {{{1, 4}, 1.0}, {{2, 3}, cplx(0.5, 0.5)}});
    CHECK(sup(project_multi(embed_multi(m), basis).rho - m.rho) < 1e-15);
}

TEST_CASE("oracle agrees with the single-excitation engine on all three blocks")
{
    const ChainSpec spec = make_chain(6);
    const auto eq = chain_master_equation(spec);
    std::mt19937_64 rng(20240601);
    for (int draw = 0; draw < 3; ++draw) {
        cplx vac;
        const auto a = random_amplitudes(rng, 6, vac);
        const DenseState d0 = single_excitation_pure(6, a, vac);
        const SingleExcState s0 = project_single_excitation(d0);
        const auto sol = spectral_solve(spec, s0);
        const std::vector<double> times{0.5, 2.0, 5.0};
        const auto samples = evolve_dense_samples(eq, d0, times, 0.005);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const auto ref = spectral_eval(sol, times[i]);
            const auto got = project_single_excitation(samples[i]);
            CHECK(sup(got.rho - ref.rho) < 1e-8);
            CHECK(sup(got.coh - ref.coh) < 1e-8);
            CHECK(std::abs(got.vac - ref.vac) < 1e-8);
        }
    }
}

TEST_CASE("oracle agrees with the two-excitation engine")
{
    const ChainSpec spec = make_chain(6);
    auto basis = std::make_shared<const MultiBasis>(6, 2);
    const auto eq = chain_master_equation(spec);
    for (const auto& tuple : {std::vector<int>{1, 6}, std::vector<int>{3, 4}}) {
        const auto m0 = multi_pure_state(basis, {{tuple, 1.0}});
        const auto ref = evolve_multi(spec, m0, 3.0, 0.01);
        const auto full = evolve_dense(eq, embed_multi(m0), 3.0, 0.005);
        CHECK(sup(project_multi(full, basis).rho - ref.rho) < 1e-6);
    }
}

}
