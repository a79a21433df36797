// Single-excitation block: generator, RK4, exact spectral solution.

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "dissichain/chain.hpp"
#include "dissichain/errors.hpp"
#include "dissichain/single_excitation.hpp"

using namespace dissichain;

namespace {

SingleExcState random_pure(int n, unsigned seed, bool with_vacuum)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    init::Custom c;
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
        c.amplitudes.emplace_back(g(rng), g(rng));
        norm += std::norm(c.amplitudes.back());
    }
    if (with_vacuum) {
        c.vacuum = {g(rng), g(rng)};
        norm += std::norm(c.vacuum);
    }
    norm = std::sqrt(norm);
    for (auto& a : c.amplitudes) a /= norm;
    c.vacuum /= norm;
    return build_initial_single(make_chain(n), c);
}

} // namespace

TEST_SUITE("single_excitation_engine") {

TEST_CASE("generator: hand-evaluated entries")
{
    const ChainSpec spec = make_chain(3, 1.0);
    SingleExcState s = SingleExcState::zero(3);
    s.rho(1, 1) = 1.0;
    const auto d = rhs_single(spec, s);
    CHECK(d.rho(1, 1).real() == doctest::Approx(-4.0));
    CHECK(d.rho(0, 1).real() == doctest::Approx(1.0));
    CHECK(d.rho(2, 1).real() == doctest::Approx(1.0));
    CHECK(d.rho(1, 0).real() == doctest::Approx(1.0));
    CHECK(d.rho(1, 2).real() == doctest::Approx(1.0));
    CHECK(d.rho(0, 0) == cplx{0.0, 0.0});
    CHECK(d.vac == doctest::Approx(4.0));  // only rho_22 moves on the diagonal

    SingleExcState c = SingleExcState::zero(3);
    c.coh(0) = 1.0;
    const auto dc = rhs_single(spec, c);
    CHECK(dc.coh(0).real() == doctest::Approx(-1.0));
    CHECK(dc.coh(1).real() == doctest::Approx(1.0));
    CHECK(dc.coh(2) == cplx{0.0, 0.0});
}

TEST_CASE("generator triplets agree with rhs_single")
{
    const ChainSpec spec = make_chain(6, 0.8);
    const auto s = random_pure(6, 3, false);
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(s.rho.data(), 36);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(36);
    for (const auto& t : single_generator_triplets(spec)) out(t.row) += t.value * v(t.col);
    const auto d = rhs_single(spec, s);
    CHECK((out - Eigen::Map<const Eigen::VectorXcd>(d.rho.data(), 36)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dimension mismatch is rejected")
{
    CHECK_THROWS_AS(rhs_single(make_chain(4), SingleExcState::zero(5)), std::invalid_argument);
}

TEST_CASE("evolve: identity at t = 0, step guard")
{
    const ChainSpec spec = make_chain(8, 2.0);
    const auto s = random_pure(8, 1, true);
    CHECK(sup_distance(evolve(spec, s, 0.0), s) == 0.0);
    CHECK_THROWS_AS(evolve(spec, s, 1.0, 0.06), GuardError);
    CHECK_NOTHROW(evolve(spec, s, 0.1, 0.05));
    CHECK_THROWS_AS(evolve(spec, s, -1.0, 0.01), std::invalid_argument);
}

TEST_CASE("evolve preserves Hermiticity, trace, W and F")
{
    const ChainSpec spec = make_chain(20, 1.0);
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto s0 = random_pure(20, seed, true);
        const auto s1 = evolve(spec, s0, 10.0);
        CHECK(hermiticity_defect(s1) < 1e-12);
        CHECK(trace_defect(s1) < 1e-10);
        const auto a = conserved_sums(s0), b = conserved_sums(s1);
        CHECK(std::abs(a.W - b.W) < 1e-10 * 10.0);
        CHECK(std::abs(a.F - b.F) < 1e-10 * 10.0);
    }
}

TEST_CASE("positivity propagates for non-negative initial elements")
{
    const ChainSpec spec = make_chain(15);
    const auto s0 = build_initial_single(spec, init::EntangledPair{7, +1});
    for (double t : {0.5, 2.0, 6.0}) {
        const auto s = evolve(spec, s0, t);
        CHECK(s.rho.real().minCoeff() > -1e-12);
    }
}

TEST_CASE("reflection symmetry")
{
    const int n = 21;
    const ChainSpec spec = make_chain(n);
    const auto s = evolve(spec, build_initial_single(spec, init::SingleSite{11}), 7.0);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(s.rho(k, l) - s.rho(n - 1 - k, n - 1 - l)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("spectrum: exact values, non-negativity, one zero mode")
{
    CHECK(eigenvalue(make_chain(2), 2, 2) == 0.0);
    CHECK(eigenvalue(make_chain(2), 1, 1) == doctest::Approx(4.0));
    CHECK(eigenvalue(make_chain(4), 2, 4) == doctest::Approx(2.0));
    CHECK_THROWS_AS(eigenvalue(make_chain(4), 0, 1), std::out_of_range);
    CHECK_THROWS_AS(eigenvalue(make_chain(4), 1, 5), std::out_of_range);

    const ChainSpec spec = make_chain(9, 1.0);
    int zeros = 0;
    for (int m = 1; m <= 9; ++m) {
        for (int n = 1; n <= 9; ++n) {
            const double l = eigenvalue(spec, m, n);
            CHECK(l >= 0.0);
            if (l == 0.0) ++zeros;
        }
    }
    CHECK(zeros == 1);
}

TEST_CASE("basis vectors: stationary mode, orthonormality, eigenvectors of the walk")
{
    const ChainSpec spec = make_chain(8, 1.0);
    const Eigen::VectorXd last = basis_vector(spec, 8);
    CHECK((last.array() - 1.0 / std::sqrt(8.0)).abs().maxCoeff() < 1e-15);

    const Eigen::MatrixXd P = mode_matrix(spec);
    CHECK((P.transpose() * P - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);

    const auto b2 = basis_vector(make_chain(2), 1);
    CHECK(std::abs(std::abs(b2(0)) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(b2(0) == doctest::Approx(-b2(1)));

    // L phi = -rate phi with L the insulated path Laplacian.
    for (int l = 1; l <= 8; ++l) {
        SingleExcState s = SingleExcState::zero(8);
        s.coh = basis_vector(spec, l).cast<cplx>();
        const auto d = rhs_single(spec, s);
        CHECK((d.coh + mode_rate(spec, l) * s.coh).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("spectral solution: initial state, coefficients, conservation")
{
    const ChainSpec spec = make_chain(12);
    const auto s0 = random_pure(12, 9, true);
    const auto sol = spectral_solve(spec, s0);
    CHECK(sup_distance(spectral_eval(sol, 0.0), s0) < 1e-10);

    const auto stat = spectral_solve(spec, stationary_state(spec));
    const auto C = stat.coefficients();
    CHECK(std::abs(C(11, 11) - cplx{1.0, 0.0}) < 1e-12);
    CHECK((C.cwiseAbs().sum() - std::abs(C(11, 11))) < 1e-12);

    const auto pair = spectral_solve(make_chain(52), build_initial_single(make_chain(52), init::EntangledPair{25, -1}));
    CHECK(pair.coefficients().row(51).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(pair.coefficients().col(51).cwiseAbs().maxCoeff() < 1e-14);

    const cplx W0 = conserved_sums(s0).W;
    for (double t : {0.3, 3.0, 30.0}) {
        const auto s = spectral_eval(sol, t);
        CHECK(std::abs(conserved_sums(s).W - W0) < 1e-12);
        CHECK(trace_defect(s) < 1e-12);
    }
}

TEST_CASE("alpha and lambda reproduce spectral_element")
{
    const ChainSpec spec = make_chain(6);
    const auto sol = spectral_solve(spec, random_pure(6, 4, false));
    const double t = 0.7;
    for (int k : {1, 3, 6}) {
        for (int l : {2, 6}) {
            cplx sum{0.0, 0.0};
            for (int m = 1; m <= 6; ++m) {
                for (int n = 1; n <= 6; ++n) sum += sol.alpha(k, l, m, n) * std::exp(-sol.lambda(m, n) * t);
            }
            CHECK(std::abs(sum - spectral_element(sol, k, l, t)) < 1e-13);
            CHECK(std::abs(sum - spectral_eval(sol, t).rho(k - 1, l - 1)) < 1e-13);
        }
    }
}

TEST_CASE("spectral vs RK4 on a small chain with coherences")
{
    const ChainSpec spec = make_chain(16, 1.0);
    const auto s0 = random_pure(16, 21, true);
    const auto sol = spectral_solve(spec, s0);
    for (double t : {1.0, 4.0, 10.0}) CHECK(sup_distance(spectral_eval(sol, t), evolve(spec, s0, t)) < 1e-8);
}

TEST_CASE("long-time limit is the uniform state")
{
    const ChainSpec spec = make_chain(20);
    const auto s0 = build_initial_single(spec, init::SingleSite{4});
    const auto s = spectral_eval(spectral_solve(spec, s0), 1000.0);
    CHECK((s.rho.array() - cplx{1.0 / 400.0, 0.0}).abs().maxCoeff() < 1e-10);
    const auto r = evolve(spec, s0, 1000.0, 0.05);
    CHECK(sup_distance(s, r) < 1e-8);
    CHECK(spectral_total_population(spectral_solve(spec, s0), 1000.0) == doctest::Approx(total_population(s)));
}

TEST_CASE("conserved sums and populations")
{
    const ChainSpec spec = make_chain(10);
    const auto s = build_initial_single(spec, init::SingleSite{4});
    CHECK(conserved_sums(s).W == cplx{1.0, 0.0});
    CHECK(conserved_sums(s).F == cplx{0.0, 0.0});
    CHECK(std::abs(conserved_sums(build_initial_single(spec, init::EntangledPair{4, -1})).W) < 1e-16);
    CHECK(conserved_sums(build_initial_single(spec, init::StationaryMixture{1.0})).W.real() ==
          doctest::Approx(1.0));
    CHECK(site_population(s, 4) == 1.0);
    CHECK(total_population(s) == 1.0);
    CHECK_THROWS_AS(site_population(s, 11), std::out_of_range);
}

TEST_CASE("propagate_block on equal chains matches spectral_eval")
{
    const ChainSpec spec = make_chain(9);
    const auto s0 = random_pure(9, 8, false);
    const Eigen::MatrixXcd b = propagate_block(s0.rho, spec, spec, 2.5);
    CHECK((b - spectral_eval(spectral_solve(spec, s0), 2.5).rho).cwiseAbs().maxCoeff() < 1e-13);
}

}
