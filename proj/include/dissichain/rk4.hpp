// rk4.hpp: Classical fixed-step 4th-order Runge-Kutta over a flat complex vector

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dissichain/kernels.hpp"

namespace dissichain {

// Number of uniform steps used to cover t_end with steps no longer than dt.
inline std::int64_t step_count(double t_end, double dt)
{
    if (t_end <= 0.0) return 0;
    return static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
}

// Integrates y' = f(y) from 0 to t_end in-place. f(y, dydt) writes the
// derivative of y into dydt (same length). The actual step is
// t_end / step_count(t_end, dt) <= dt, so the final time is hit exactly.
template <class Rhs>
void rk4_integrate(Eigen::VectorXcd& y, double t_end, double dt, Rhs&& f)
{
    if (!(dt > 0.0)) throw std::invalid_argument("rk4: dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("rk4: t_end must be non-negative");
    const std::int64_t steps = step_count(t_end, dt);
    if (steps == 0) return;
    const double h = t_end / static_cast<double>(steps);

    const Eigen::Index n = y.size();
    Eigen::VectorXcd k(n), acc(n), stage(n);
    auto span_of = [](Eigen::VectorXcd& v) { return std::span<std::complex<double>>(v.data(), v.size()); };
    auto cspan_of = [](const Eigen::VectorXcd& v) {
        return std::span<const std::complex<double>>(v.data(), v.size());
    };

    for (std::int64_t s = 0; s < steps; ++s) {
        // k1
        f(y, k);
        acc = y;
        kernels::axpy(h / 6.0, cspan_of(k), span_of(acc));
        stage = y;
        kernels::axpy(h / 2.0, cspan_of(k), span_of(stage));
        // k2
        f(stage, k);
        kernels::axpy(h / 3.0, cspan_of(k), span_of(acc));
        stage = y;
        kernels::axpy(h / 2.0, cspan_of(k), span_of(stage));
        // k3
        f(stage, k);
        kernels::axpy(h / 3.0, cspan_of(k), span_of(acc));
        stage = y;
        kernels::axpy(h, cspan_of(k), span_of(stage));
        // k4
        f(stage, k);
        kernels::axpy(h / 6.0, cspan_of(k), span_of(acc));
        y.swap(acc);
    }
}

} // namespace dissichain
