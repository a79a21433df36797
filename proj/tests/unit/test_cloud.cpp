// Dipole-coupled cloud amplitudes.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "dissichain/cloud.hpp"
#include "dissichain/errors.hpp"

using namespace dissichain;
using namespace dissichain::cloud;

namespace {

CloudSpec pair_at(double distance, bool rwa, double gamma = 1.0)
{
    return CloudSpec{{Eigen::Vector3d::Zero(), Eigen::Vector3d(distance, 0.0, 0.0)}, 1.0, gamma, rwa};
}

} // namespace

TEST_SUITE("cloud_comparator") {

TEST_CASE("kernel values at k0 r = pi")
{
    const auto full = kernel(pair_at(std::numbers::pi, false));
    CHECK(std::abs(full(0, 1) - cplx(-1.0 / std::numbers::pi, 0.0)) < 1e-15);
    const auto rwa = kernel(pair_at(std::numbers::pi, true));
    CHECK(std::abs(rwa(0, 1)) < 1e-16);
    CHECK(full(0, 0) == cplx(0.0));
}

TEST_CASE("kernel is symmetric")
{
    const CloudSpec c{grid_cloud(2, 0.7), 1.3, 1.0, false};
    const auto k = kernel(c);
    CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.size() == 8);
}

TEST_CASE("single atom decays as exp(-2 gamma t)")
{
    const CloudSpec c{{Eigen::Vector3d::Zero()}, 1.0, 0.7, true};
    Eigen::VectorXcd b0(1);
    b0(0) = 1.0;
    const auto traj = evolve_amplitudes(c, b0, 5.0, 0.01, 50);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        CHECK(std::abs(total_probability(traj.beta[i]) - std::exp(-2.0 * 0.7 * traj.times[i])) < 1e-9);
    }
    CHECK(traj.times.back() == doctest::Approx(5.0));
}

TEST_CASE("two-atom RWA mode rates")
{
    const auto r = decay_rates(pair_at(std::numbers::pi / 2.0, true, 1.5));
    CHECK(std::abs(r(0) - cplx(1.5 * (1.0 - 2.0 / std::numbers::pi), 0.0)) < 1e-12);
    CHECK(std::abs(r(1) - cplx(1.5 * (1.0 + 2.0 / std::numbers::pi), 0.0)) < 1e-12);
}

TEST_CASE("far-field atoms decay independently")
{
    const auto r = decay_rates(pair_at(1e9, false));
    CHECK(std::abs(r(0) - cplx(1.0)) < 1e-8);
    CHECK(std::abs(r(1) - cplx(1.0)) < 1e-8);
}

TEST_CASE("density from amplitudes")
{
    const CloudSpec c{grid_cloud(2, 0.5), 1.0, 1.0, false};
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(8);
    b(0) = cplx(0.6, 0.0);
    b(3) = cplx(0.0, 0.8);
    const auto rho = density_from_amplitudes(b);
    CHECK(rho.trace().real() == doctest::Approx(1.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    CHECK(es.eigenvalues()(7) == doctest::Approx(1.0));
    CHECK(std::abs(es.eigenvalues()(6)) < 1e-14);

    // Finite-difference check of the density equation of motion.
    const double dt = 2e-4;
    const auto traj = evolve_amplitudes(c, b, dt, dt / 2.0, 1);
    const Eigen::MatrixXcd fd = (density_from_amplitudes(traj.beta.back()) - rho) / dt;
    const Eigen::MatrixXcd exact = density_derivative(c, rho);
    CHECK((fd - exact).cwiseAbs().maxCoeff() < 1e-2 * exact.cwiseAbs().maxCoeff());
}

TEST_CASE("RWA probability never grows on a grid cloud")
{
    const CloudSpec c{grid_cloud(3, 0.5), 1.0, 1.0, true};
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(27);
    b(13) = 1.0;
    const double dt = 0.05 / rate_scale(c);
    const auto traj = evolve_amplitudes(c, b, 5.0, dt, 1);
    for (std::size_t i = 1; i < traj.beta.size(); ++i) {
        CHECK(total_probability(traj.beta[i]) <= total_probability(traj.beta[i - 1]) + 1e-14);
    }
}

TEST_CASE("validation and guards")
{
    CHECK_THROWS_AS((CloudSpec{{}, 1.0, 1.0, true}.validate()), std::invalid_argument);
    CHECK_THROWS_AS(pair_at(0.0, true).validate(), std::invalid_argument);
    Eigen::VectorXcd b = Eigen::VectorXcd::Constant(2, 1.0);
    CHECK_THROWS_AS(evolve_amplitudes(pair_at(1.0, true), b, 1.0, 0.01), std::invalid_argument);
    b(1) = 0.0;
    CHECK_THROWS_AS(evolve_amplitudes(pair_at(1.0, true), b, 1.0, 1.0), GuardError);
}

TEST_CASE("trajectory CSV")
{
    Trajectory t;
    t.times = {0.0};
    t.beta = {Eigen::VectorXcd::Constant(2, cplx(0.5, 0.0))};
    std::ostringstream os;
    write_trajectory_csv(os, t);
    CHECK(os.str().rfind("t,j,re_beta,im_beta,total_probability\n", 0) == 0);
}

}
