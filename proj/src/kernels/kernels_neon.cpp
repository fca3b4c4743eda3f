//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file kernels/kernels_neon.cpp
//! AArch64 variant. Two 2-lane registers emulate the canonical 4-lane order:
//! lo holds lanes (0, 1) and hi holds lanes (2, 3).
//---------------------------------------------------------------------------//
#include <arm_neon.h>

#include "blmix/kernels.hpp"

namespace blmix::kernels
{
namespace
{
inline double hsum_canonical(float64x2_t lo, float64x2_t hi)
{
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1))
           + (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

double abs_diff_sum_neon(double const* a, double const* b, std::size_t n)
{
    float64x2_t lo = vdupq_n_f64(0), hi = vdupq_n_f64(0);
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        lo = vaddq_f64(lo, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        hi = vaddq_f64(hi, vabdq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double result = hsum_canonical(lo, hi);
    for (std::size_t i = body; i < n; ++i)
    {
        double d = a[i] - b[i];
        result += d < 0 ? -d : d;
    }
    return result;
}

void axpy_neon(double alpha, double const* x, double* y, std::size_t n)
{
    float64x2_t const va = vdupq_n_f64(alpha);
    std::size_t const body = n - n % 2;
    for (std::size_t i = 0; i < body; i += 2)
    {
        // Separate multiply and add: a fused vfmaq would round differently.
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (std::size_t i = body; i < n; ++i)
    {
        y[i] += alpha * x[i];
    }
}

double dot_neon(double const* a, double const* b, std::size_t n)
{
    float64x2_t lo = vdupq_n_f64(0), hi = vdupq_n_f64(0);
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double result = hsum_canonical(lo, hi);
    for (std::size_t i = body; i < n; ++i)
    {
        result += a[i] * b[i];
    }
    return result;
}

double sum_neon(double const* a, std::size_t n)
{
    float64x2_t lo = vdupq_n_f64(0), hi = vdupq_n_f64(0);
    std::size_t const body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4)
    {
        lo = vaddq_f64(lo, vld1q_f64(a + i));
        hi = vaddq_f64(hi, vld1q_f64(a + i + 2));
    }
    double result = hsum_canonical(lo, hi);
    for (std::size_t i = body; i < n; ++i)
    {
        result += a[i];
    }
    return result;
}

}  // namespace

KernelTable const* neon_table()
{
    static KernelTable const table{
        "neon", abs_diff_sum_neon, axpy_neon, dot_neon, sum_neon};
    return &table;
}

}  // namespace blmix::kernels
