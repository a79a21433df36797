// Serial vs OpenMP timings of the hot kernels.
//
// Usage: dissichain_bench [repetitions]

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "dissichain/chain.hpp"
#include "dissichain/kernels.hpp"
#include "dissichain/multi_excitation.hpp"

using namespace dissichain;
using Clock = std::chrono::steady_clock;

namespace {

double best_of(int reps, const std::function<void()>& f)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

void report(const std::string& name, double serial, double parallel, bool identical)
{
    std::cout << std::left << std::setw(28) << name << std::right << std::setw(12) << serial * 1e3 << std::setw(12)
              << parallel * 1e3 << std::setw(10) << serial / parallel << std::setw(11) << (identical ? "yes" : "NO")
              << "\n";
}

std::vector<cplx> pattern(std::size_t n)
{
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {std::sin(0.37 * i), std::cos(0.11 * i)};
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
    std::cout << "threads: " << kernels::thread_count() << ", best of " << reps << "\n"
              << std::left << std::setw(28) << "kernel" << std::right << std::setw(12) << "serial ms" << std::setw(12)
              << "omp ms" << std::setw(10) << "speedup" << std::setw(11) << "identical" << "\n"
              << std::fixed << std::setprecision(3);

    {
        const ChainSpec spec = make_chain(801);
        const BondRates b = bond_rates(spec);
        const kernels::WalkRates rates{b.right, b.left};
        const auto rho = pattern(801 * 801);
        std::vector<cplx> a(rho.size()), c(rho.size());
        const double s = best_of(reps, [&] { kernels::serial::walk2d_rhs(rates, rho, a); });
        const double p = best_of(reps, [&] { kernels::walk2d_rhs(rates, rho, c); });
        report("walk2d_rhs n=801", s, p, a == c);
    }
    {
        const auto csr = build_generator(make_chain(40), 2).to_csr();
        const auto x = pattern(static_cast<std::size_t>(csr.cols));
        std::vector<cplx> a(x.size()), c(x.size());
        const double s = best_of(reps, [&] { kernels::serial::csr_matvec(csr, x, a); });
        const double p = best_of(reps, [&] { kernels::csr_matvec(csr, x, c); });
        report("csr_matvec n=40 m=2", s, p, a == c);
    }
    {
        const auto x = pattern(1 << 22);
        std::vector<cplx> a = pattern(1 << 22), c = a;
        const double s = best_of(reps, [&] { kernels::serial::axpy({0.5, 0.25}, x, a); });
        const double p = best_of(reps, [&] { kernels::axpy({0.5, 0.25}, x, c); });
        report("axpy 4M", s, p, a == c);
    }
    return 0;
}
