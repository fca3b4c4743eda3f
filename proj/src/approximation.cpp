//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file approximation.cpp
//---------------------------------------------------------------------------//
#include "blmix/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blmix/errors.hpp"

namespace blmix
{
namespace
{
double phi(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
}

double increment_sigma(std::int64_t n, std::int64_t k, std::int64_t ell)
{
    double const nn = static_cast<double>(n);
    double const p = static_cast<double>(ell) / nn;
    double const f = static_cast<double>(k) / nn;
    return std::sqrt(static_cast<double>(k) * p * (1 - p) * (1 - f));
}

}  // namespace

//---------------------------------------------------------------------------//
ApproxParams ApproxParams::make(std::int64_t n, std::int64_t k, std::int64_t ell)
{
    require(n >= 1, "n must be positive");
    require(k > 0 && k < n, "approximation requires 0 < k < n");
    require(ell > 0 && ell < n, "approximation requires 0 < ell < n");
    ApproxParams ap;
    ap.n = n;
    ap.k = k;
    ap.ell = ell;
    ap.p = static_cast<double>(ell) / static_cast<double>(n);
    ap.q = 1 - ap.p;
    ap.f = static_cast<double>(k) / static_cast<double>(n);
    ap.sigma = increment_sigma(n, k, ell);
    return ap;
}

FourChainSetup FourChainSetup::make(ChainParams const& params, std::int64_t x0,
                                    std::int64_t y0)
{
    params.validate();
    require(x0 >= 0 && x0 <= params.n && y0 >= 0 && y0 <= params.n,
            "states must lie in [0, n]");
    FourChainSetup s;
    s.n = params.n;
    s.k = params.k;
    s.x0 = x0;
    s.y0 = y0;
    s.eta = x0 - y0;
    s.ell = {x0, params.n - x0, y0, params.n - y0};
    for (std::size_t i = 0; i < 4; ++i)
    {
        s.p[i] = static_cast<double>(s.ell[i]) / static_cast<double>(params.n);
        s.sigma[i] = increment_sigma(params.n, params.k, s.ell[i]);
    }
    return s;
}

//---------------------------------------------------------------------------//
double normalization_constant(ApproxParams const& ap)
{
    require(ap.sigma > 0, "normalization constant requires sigma > 0");
    double total = 0;
    for (std::int64_t j = 0; j <= ap.k; ++j)
    {
        total += phi(ap.x_tilde(j));
    }
    return total / ap.sigma;
}

FinitePmf dnormal_proxy(std::int64_t n, std::int64_t k, std::int64_t ell)
{
    HypergeomParams{n, ell, k}.validate();
    double const sigma = increment_sigma(n, k, ell);
    if (sigma == 0)
    {
        // k, ell in {0, n}: k p is an integer and the law is degenerate
        return FinitePmf::point_mass(n == 0 ? 0 : k * ell / n);
    }
    double const center = static_cast<double>(k) * static_cast<double>(ell)
                          / static_cast<double>(n);
    return discrete_normal_pmf({center, sigma, 0, k});
}

double hyper_vs_dnormal_tv(std::int64_t n, std::int64_t k, std::int64_t ell)
{
    return tv_distance(hypergeom_pmf({n, ell, k}), dnormal_proxy(n, k, ell));
}

WindowConstants window_constants(ApproxParams const& ap)
{
    require(ap.f > 0 && ap.f < 1, "window constants require 0 < f < 1");
    WindowConstants w;
    w.f_bar = std::min(ap.f, 1 - ap.f);
    w.a = (w.f_bar + 4) / (4 * (1 - w.f_bar));
    w.delta_win = 1 / (10 * std::max(w.a, 2.0));

    double const edge = w.delta_win * ap.sigma;
    double const kp = static_cast<double>(ap.k) * ap.p;
    // Start from the rounded bounds and settle on the exact predicate
    std::int64_t lo = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(kp - edge * ap.sigma)), 0, ap.k);
    while (lo > 0 && ap.x_tilde(lo - 1) >= -edge)
    {
        --lo;
    }
    while (lo <= ap.k && ap.x_tilde(lo) < -edge)
    {
        ++lo;
    }
    std::int64_t hi = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::floor(kp + edge * ap.sigma)), 0, ap.k);
    while (hi < ap.k && ap.x_tilde(hi + 1) <= edge)
    {
        ++hi;
    }
    while (hi >= 0 && ap.x_tilde(hi) > edge)
    {
        --hi;
    }
    w.L = lo;
    w.R = hi;
    return w;
}

CentralRegionReport central_region_check(ApproxParams const& ap,
                                         std::vector<double> const& x_grid)
{
    CentralRegionReport report;
    report.window = window_constants(ap);
    double const kp = static_cast<double>(ap.k) * ap.p;
    double const kq = static_cast<double>(ap.k) * ap.q;
    report.hypothesis_ok = 6 * std::min(kp, kq) >= 1;

    double const edge = report.window.delta_win * ap.sigma;
    auto const hyper = hypergeom_pmf(ap.hypergeom());
    auto const dn = discrete_normal_pmf(ap.dnormal());

    for (double x : x_grid)
    {
        require(x >= -edge && x <= 0, "grid points must lie in [-delta_win sigma, 0]");
        CentralRegionRow row;
        row.x = x;
        row.j_x = std::min(ap.k, static_cast<std::int64_t>(std::floor(kp - x * ap.sigma)));
        for (std::int64_t j = report.window.L; j <= row.j_x; ++j)
        {
            row.partial_sum += std::fabs(hyper(j) - dn(j));
        }
        row.shape = (1 + x * x) * std::exp(-0.07 * x * x) / (ap.sigma * (1 - ap.f));
        row.c_hat = row.partial_sum / row.shape;
        report.max_c_hat = std::max(report.max_c_hat, row.c_hat);
        report.rows.push_back(row);
    }
    return report;
}

TvDecomposition one_step_tv(ChainParams const& params, std::int64_t x0, std::int64_t y0)
{
    TvDecomposition out;
    out.setup = FourChainSetup::make(params, x0, y0);
    auto const& s = out.setup;

    std::array<FinitePmf, 4> z;
    for (std::size_t i = 0; i < 4; ++i)
    {
        z[i] = dnormal_proxy(s.n, s.k, s.ell[i]);
        out.hyper_dn_terms[i] = tv_distance(hypergeom_pmf({s.n, s.ell[i], s.k}), z[i]);
    }
    out.shift_term = tv_distance(z[1].shifted(s.eta), z[3]);
    out.center_term = tv_distance(z[0], z[2]);
    out.total_bound = out.shift_term + out.center_term;
    for (double term : out.hyper_dn_terms)
    {
        out.total_bound += term;
    }

    if (params.n <= one_step_exact_limit)
    {
        out.exact_tv = tv_distance(transition_row(params, x0), transition_row(params, y0));
    }
    return out;
}

ShiftPartition shift_partition(FourChainSetup const& setup, double K)
{
    require(K > 0, "K must be positive");
    auto const z1 = dnormal_proxy(setup.n, setup.k, setup.ell[1]).shifted(setup.eta);
    auto const z3 = dnormal_proxy(setup.n, setup.k, setup.ell[3]);

    double const half_k = static_cast<double>(setup.k) / 2;
    double const reach = K * std::sqrt(static_cast<double>(setup.n));
    // Overlap of X_k and X_k + eta
    std::int64_t const y_lo = std::max<std::int64_t>(0, setup.eta);
    std::int64_t const y_hi = std::min(setup.k, setup.k + setup.eta);

    ShiftPartition part;
    std::int64_t const lo = std::min(z1.lo(), z3.lo());
    std::int64_t const hi = std::max(z1.hi(), z3.hi());
    for (std::int64_t j = lo; j <= hi; ++j)
    {
        bool const in_xk = j >= 0 && j <= setup.k;
        bool const in_shifted = j >= setup.eta && j <= setup.k + setup.eta;
        if (j >= y_lo && j <= y_hi)
        {
            double const diff = std::fabs(z1(j) - z3(j));
            double const dj = static_cast<double>(j);
            if (dj >= half_k - reach && dj <= half_k + reach)
            {
                part.t1 += diff;
            }
            else
            {
                part.t2 += diff;
            }
        }
        else
        {
            if (in_xk && !in_shifted)
            {
                part.t3 += z3(j);
            }
            if (in_shifted && !in_xk)
            {
                part.t4 += z1(j);
            }
        }
    }
    part.tv = tv_distance(z1, z3);
    return part;
}

}  // namespace blmix
