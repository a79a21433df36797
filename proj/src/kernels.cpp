// kernels.cpp: OpenMP kernels and serial references

#include "dissichain/kernels.hpp"

#include <cassert>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dissichain::kernels {

namespace {

inline cplx walk2d_element(const WalkRates& r, const cplx* rho, std::ptrdiff_t n,
                           std::ptrdiff_t k, std::ptrdiff_t l)
{
    const cplx* col = rho + l * n;
    cplx acc = -(r.right[k] + r.left[k] + r.right[l] + r.left[l]) * col[k];
    if (k + 1 < n) acc += r.right[k] * col[k + 1];
    if (k > 0) acc += r.left[k] * col[k - 1];
    if (l + 1 < n) acc += r.right[l] * col[k + n];
    if (l > 0) acc += r.left[l] * col[k - n];
    return acc;
}

} // namespace

void walk2d_rhs(WalkRates rates, std::span<const cplx> rho, std::span<cplx> out)
{
    const auto n = static_cast<std::ptrdiff_t>(rates.right.size());
    assert(static_cast<std::ptrdiff_t>(rho.size()) == n * n && rho.size() == out.size());
    const cplx* in = rho.data();
    cplx* dst = out.data();
#pragma omp parallel for schedule(static) if (n >= 64)
    for (std::ptrdiff_t l = 0; l < n; ++l) {
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            dst[k + l * n] = walk2d_element(rates, in, n, k, l);
        }
    }
}

void walk1d_rhs(WalkRates rates, std::span<const cplx> v, std::span<cplx> out)
{
    const auto n = static_cast<std::ptrdiff_t>(rates.right.size());
    assert(static_cast<std::ptrdiff_t>(v.size()) == n && out.size() == v.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        cplx acc = -(rates.right[k] + rates.left[k]) * v[k];
        if (k + 1 < n) acc += rates.right[k] * v[k + 1];
        if (k > 0) acc += rates.left[k] * v[k - 1];
        out[k] = acc;
    }
}

void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y)
{
    assert(static_cast<std::int64_t>(x.size()) == a.cols);
    assert(static_cast<std::int64_t>(y.size()) == a.rows);
    const std::int64_t rows = a.rows;
#pragma omp parallel for schedule(static) if (rows >= 1024)
    for (std::int64_t i = 0; i < rows; ++i) {
        cplx acc{0.0, 0.0};
        for (std::int64_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            acc += a.values[p] * x[a.col_idx[p]];
        }
        y[i] = acc;
    }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y)
{
    assert(x.size() == y.size());
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= 65536)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

namespace serial {

void walk2d_rhs(WalkRates rates, std::span<const cplx> rho, std::span<cplx> out)
{
    const auto n = static_cast<std::ptrdiff_t>(rates.right.size());
    for (std::ptrdiff_t l = 0; l < n; ++l) {
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            out[k + l * n] = walk2d_element(rates, rho.data(), n, k, l);
        }
    }
}

void walk1d_rhs(WalkRates rates, std::span<const cplx> v, std::span<cplx> out)
{
    const auto n = static_cast<std::ptrdiff_t>(rates.right.size());
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        cplx acc = -(rates.right[k] + rates.left[k]) * v[k];
        if (k + 1 < n) acc += rates.right[k] * v[k + 1];
        if (k > 0) acc += rates.left[k] * v[k - 1];
        out[k] = acc;
    }
}

void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y)
{
    for (std::int64_t i = 0; i < a.rows; ++i) {
        cplx acc{0.0, 0.0};
        for (std::int64_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            acc += a.values[p] * x[a.col_idx[p]];
        }
        y[i] = acc;
    }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

} // namespace serial

int thread_count()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int n)
{
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace dissichain::kernels
