//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file kernels/dispatch.cpp
//---------------------------------------------------------------------------//
#include <cstdlib>
#include <string_view>

#include "blmix/kernels.hpp"

namespace blmix::kernels
{
#if defined(BLMIX_HAVE_AVX2)
KernelTable const* avx2_table();
#endif
#if defined(BLMIX_HAVE_NEON)
KernelTable const* neon_table();
#endif

KernelTable const* simd_table()
{
#if defined(BLMIX_HAVE_AVX2)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2"))
    {
        return avx2_table();
    }
    return nullptr;
#elif defined(BLMIX_HAVE_NEON)
    // Advanced SIMD is mandatory on AArch64
    return neon_table();
#else
    return nullptr;
#endif
}

KernelTable const& active()
{
    static KernelTable const& selected = []() -> KernelTable const& {
        char const* env = std::getenv("BLMIX_SIMD");
        if (env && std::string_view(env) == "scalar")
        {
            return scalar_table();
        }
        if (auto const* simd = simd_table())
        {
            return *simd;
        }
        return scalar_table();
    }();
    return selected;
}

}  // namespace blmix::kernels
