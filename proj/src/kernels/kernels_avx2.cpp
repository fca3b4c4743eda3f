//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file kernels/kernels_avx2.cpp
//! Built with -mavx2. Nothing here may be called before dispatch has checked
//! the CPU, and no inline library code may be instantiated in this file.
//---------------------------------------------------------------------------//
#include <immintrin.h>

#include "blmix/kernels.hpp"

namespace blmix::kernels
{
namespace
{
// Combine lanes as (l0 + l1) + (l2 + l3) to match the scalar reference.
inline double hsum_canonical(__m256d v)
{
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double abs_diff_sum_avx2(double const* a, double const* b, std::size_t n)
{
    __m256d const sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
    }
    double result = hsum_canonical(acc);
    for (std::size_t i = body; i < n; ++i)
    {
        double d = a[i] - b[i];
        result += d < 0 ? -d : d;
    }
    return result;
}

void axpy_avx2(double alpha, double const* x, double* y, std::size_t n)
{
    __m256d const va = _mm256_set1_pd(alpha);
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (std::size_t i = body; i < n; ++i)
    {
        y[i] += alpha * x[i];
    }
}

double dot_avx2(double const* a, double const* b, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double result = hsum_canonical(acc);
    for (std::size_t i = body; i < n; ++i)
    {
        result += a[i] * b[i];
    }
    return result;
}

double sum_avx2(double const* a, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    }
    double result = hsum_canonical(acc);
    for (std::size_t i = body; i < n; ++i)
    {
        result += a[i];
    }
    return result;
}

}  // namespace

KernelTable const* avx2_table()
{
    static KernelTable const table{
        "avx2", abs_diff_sum_avx2, axpy_avx2, dot_avx2, sum_avx2};
    return &table;
}

}  // namespace blmix::kernels
