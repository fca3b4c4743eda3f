//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file kernels/kernels_scalar.cpp
//---------------------------------------------------------------------------//
#include <cmath>

#include "blmix/kernels.hpp"

namespace blmix::kernels
{
namespace
{
//---------------------------------------------------------------------------//
// Four-lane reduction written out in scalar code. Keep in sync with the
// lane layout of the SIMD variants.
template<class F>
double reduce4(std::size_t n, F&& term)
{
    double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        l0 += term(i);
        l1 += term(i + 1);
        l2 += term(i + 2);
        l3 += term(i + 3);
    }
    double result = (l0 + l1) + (l2 + l3);
    for (std::size_t i = body; i < n; ++i)
    {
        result += term(i);
    }
    return result;
}

double abs_diff_sum_scalar(double const* a, double const* b, std::size_t n)
{
    return reduce4(n, [=](std::size_t i) { return std::fabs(a[i] - b[i]); });
}

void axpy_scalar(double alpha, double const* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        y[i] += alpha * x[i];
    }
}

double dot_scalar(double const* a, double const* b, std::size_t n)
{
    return reduce4(n, [=](std::size_t i) { return a[i] * b[i]; });
}

double sum_scalar(double const* a, std::size_t n)
{
    return reduce4(n, [=](std::size_t i) { return a[i]; });
}

}  // namespace

KernelTable const& scalar_table()
{
    static KernelTable const table{
        "scalar", abs_diff_sum_scalar, axpy_scalar, dot_scalar, sum_scalar};
    return table;
}

}  // namespace blmix::kernels
