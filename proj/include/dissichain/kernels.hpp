// kernels.hpp: Data-parallel inner loops (OpenMP) and their serial references
//
// Every kernel here exists twice: the default version is parallelized with
// OpenMP, the one in namespace serial is a plain loop kept as a test oracle
// and as the benchmark baseline. Both must produce bit-identical results;
// neither uses reductions, so thread count never changes the output.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace dissichain::kernels {

using cplx = std::complex<double>;

// Random-walk generator on a chain with per-site hop rates. right[i] is the
// rate for site i -> i+1 (and back), left[i] == right[i-1], left[0] == 0.
struct WalkRates {
    std::span<const double> right;
    std::span<const double> left;
};

// out(k,l) = -(r_k + l_k + r_l + l_l) rho(k,l) + r_k rho(k+1,l) + l_k rho(k-1,l)
//            + r_l rho(k,l+1) + l_l rho(k,l-1)
// rho and out are n x n, column-major.
void walk2d_rhs(WalkRates rates, std::span<const cplx> rho, std::span<cplx> out);

// One-index version of walk2d_rhs acting on a vector of length n.
void walk1d_rhs(WalkRates rates, std::span<const cplx> v, std::span<cplx> out);

// Compressed sparse rows with real coefficients.
struct CsrMatrix {
    std::int64_t rows{0};
    std::int64_t cols{0};
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int64_t> col_idx;
    std::vector<double> values;
};

// y = A x
void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y);

// y = a * x + y over complex vectors.
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

namespace serial {
void walk2d_rhs(WalkRates rates, std::span<const cplx> rho, std::span<cplx> out);
void walk1d_rhs(WalkRates rates, std::span<const cplx> v, std::span<cplx> out);
void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
} // namespace serial

// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int thread_count();
void set_thread_count(int n);

} // namespace dissichain::kernels
