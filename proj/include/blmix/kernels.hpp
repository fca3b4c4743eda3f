//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/kernels.hpp
//! Dense double-precision inner loops with scalar and SIMD variants.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace blmix::kernels
{
//---------------------------------------------------------------------------//
/*!
 * Function table for one instruction-set variant.
 *
 * Every reduction uses the same canonical order: four interleaved partial
 * sums (element i goes to lane i % 4 over the largest multiple-of-four
 * prefix), combined as (l0 + l1) + (l2 + l3), then the remaining tail is
 * added left to right. The scalar reference follows that order literally,
 * so all variants produce bit-identical results.
 */
struct KernelTable
{
    std::string_view name;

    //! sum_i |a_i - b_i|
    double (*abs_diff_sum)(double const* a, double const* b, std::size_t n);
    //! y_i += alpha * x_i
    void (*axpy)(double alpha, double const* x, double* y, std::size_t n);
    //! sum_i a_i * b_i
    double (*dot)(double const* a, double const* b, std::size_t n);
    //! sum_i a_i
    double (*sum)(double const* a, std::size_t n);
};

// Portable reference implementation
KernelTable const& scalar_table();

// SIMD implementation for this build and CPU, or nullptr
KernelTable const* simd_table();

// Table used by the library: SIMD when the CPU supports it, unless the
// BLMIX_SIMD environment variable is set to "scalar"
KernelTable const& active();

//---------------------------------------------------------------------------//
// Convenience wrappers over the active table
//---------------------------------------------------------------------------//
inline double abs_diff_sum(std::span<double const> a, std::span<double const> b)
{
    return active().abs_diff_sum(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<double const> x, std::span<double> y)
{
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double dot(std::span<double const> a, std::span<double const> b)
{
    return active().dot(a.data(), b.data(), a.size());
}

inline double sum(std::span<double const> a)
{
    return active().sum(a.data(), a.size());
}

}  // namespace blmix::kernels
