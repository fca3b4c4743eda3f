//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/approximation.hpp
//! Discrete-normal approximation of hypergeometric increments.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "blmix/chain_kernel.hpp"
#include "blmix/distributions.hpp"

namespace blmix
{
//---------------------------------------------------------------------------//
/*!
 * H ~ Hyper(n, ell, k) and its normal proxy on X_k = {0, ..., k}.
 *
 * p = ell/n, q = 1 - p, f = k/n, sigma = sqrt(k p q (1 - f)); the standardized
 * points are x~_j = (j - k p) / sigma.
 */
struct ApproxParams
{
    std::int64_t n{0};
    std::int64_t k{0};
    std::int64_t ell{0};
    double p{0};
    double f{0};
    double q{0};
    double sigma{0};

    // Fill derived fields; throws DomainError unless 0 < f < 1 and 0 < p < 1
    static ApproxParams make(std::int64_t n, std::int64_t k, std::int64_t ell);

    double x_tilde(std::int64_t j) const
    {
        return (static_cast<double>(j) - static_cast<double>(k) * p) / sigma;
    }
    HypergeomParams hypergeom() const { return {n, ell, k}; }
    DiscreteNormalParams dnormal() const
    {
        return {static_cast<double>(k) * p, sigma, 0, k};
    }
};

//! Window [L, R] of points with |x~_j| <= delta_win sigma
struct WindowConstants
{
    double f_bar{0};
    double a{0};
    double delta_win{0};
    std::int64_t L{0};
    std::int64_t R{-1};
};

struct CentralRegionRow
{
    double x{0};
    std::int64_t j_x{0};
    //! sum over j = L..J_x of |P(H = j) - P(Z = j)|
    double partial_sum{0};
    //! (1 + x^2) exp(-0.07 x^2) / (sigma (1 - f))
    double shape{0};
    //! partial_sum / shape
    double c_hat{0};
};

struct CentralRegionReport
{
    WindowConstants window;
    std::vector<CentralRegionRow> rows;
    double max_c_hat{0};
    //! 6 min(kp, kq) >= 1
    bool hypothesis_ok{false};
};

//! Parameters of the four increments of two chains started at x0 and y0
struct FourChainSetup
{
    std::int64_t n{0};
    std::int64_t k{0};
    std::int64_t x0{0};
    std::int64_t y0{0};
    std::int64_t eta{0};
    std::array<std::int64_t, 4> ell{};
    std::array<double, 4> p{};
    std::array<double, 4> sigma{};

    static FourChainSetup make(ChainParams const& params, std::int64_t x0, std::int64_t y0);
};

/*!
 * Triangle-inequality bound on TV(law X_1, law Y_1).
 *
 * hyper_dn_terms[i] = TV(H_i, Z_i); shift_term = TV(eta + Z_1, Z_3);
 * center_term = TV(Z_0, Z_2). exact_tv is filled for n up to
 * one_step_exact_limit.
 */
struct TvDecomposition
{
    FourChainSetup setup;
    std::array<double, 4> hyper_dn_terms{};
    double shift_term{0};
    double center_term{0};
    double total_bound{0};
    std::optional<double> exact_tv;
};

//! Split of 2 TV(eta + Z_1, Z_3) by the central interval and support overlap
struct ShiftPartition
{
    double t1{0};  //!< overlap, inside [k/2 - K sqrt n, k/2 + K sqrt n]
    double t2{0};  //!< overlap, outside that interval
    double t3{0};  //!< mass of Z_3 off the shifted support
    double t4{0};  //!< mass of eta + Z_1 off X_k
    double tv{0};  //!< TV(eta + Z_1, Z_3) from tv_distance

    double sum() const { return t1 + t2 + t3 + t4; }
};

inline constexpr std::int64_t one_step_exact_limit = 10000;

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

// Direct sum of phi(x~_j) / sigma over j = 0..k
double normalization_constant(ApproxParams const& ap);

// Normal proxy dN(k p, sigma, X_k); point mass at k p when sigma = 0
FinitePmf dnormal_proxy(std::int64_t n, std::int64_t k, std::int64_t ell);

// Exact TV(Hyper(n, ell, k), dN(k p, sigma, X_k))
double hyper_vs_dnormal_tv(std::int64_t n, std::int64_t k, std::int64_t ell);

WindowConstants window_constants(ApproxParams const& ap);

// Partial absolute-difference sums against (1 + x^2) exp(-0.07 x^2)/(sigma (1-f))
CentralRegionReport central_region_check(ApproxParams const& ap,
                                         std::vector<double> const& x_grid);

// Six-term bound on the one-step TV between starts x0 and y0
TvDecomposition one_step_tv(ChainParams const& params, std::int64_t x0, std::int64_t y0);

// Term-by-term split of 2 TV(eta + Z_1, Z_3) with cutoff constant K
ShiftPartition shift_partition(FourChainSetup const& setup, double K);

}  // namespace blmix
