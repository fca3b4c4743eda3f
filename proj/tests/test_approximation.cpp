//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/test_approximation.cpp
//---------------------------------------------------------------------------//
#include <algorithm>
#include <cmath>
#include <numbers>

#include <doctest.h>

#include "blmix/approximation.hpp"
#include "blmix/errors.hpp"

using namespace blmix;

namespace
{
double phi(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
}

}  // namespace

TEST_CASE("approximation parameters")
{
    auto const ap = ApproxParams::make(100, 25, 50);
    CHECK(ap.p == 0.5);
    CHECK(ap.f == 0.25);
    CHECK(ap.sigma == doctest::Approx(2.16506).epsilon(1e-5));
    CHECK(ap.x_tilde(12) == doctest::Approx((12 - 12.5) / ap.sigma));
    CHECK_THROWS_AS(ApproxParams::make(100, 0, 50), DomainError);
    CHECK_THROWS_AS(ApproxParams::make(100, 25, 100), DomainError);
}

TEST_CASE("normalization constant")
{
    auto const ap = ApproxParams::make(100, 25, 50);
    double direct = 0;
    for (int j = 0; j <= 25; ++j)
    {
        direct += phi((j - 12.5) / ap.sigma) / ap.sigma;
    }
    double const norm = normalization_constant(ap);
    CHECK(norm == doctest::Approx(direct).epsilon(1e-14));
    // Integral-comparison sandwich
    double const edge = 1 / std::sqrt(2 * std::numbers::pi * ap.sigma * ap.sigma);
    CHECK(norm >= 1 - edge - 0.02);
    CHECK(norm <= 1 + edge);

    // Same constant as the discrete normal normalizer
    for (std::int64_t n : {100, 1000, 10000, 100000})
    {
        auto const a = ApproxParams::make(n, n / 4, n / 2);
        CHECK(normalization_constant(a)
              == doctest::Approx(discrete_normal_normalizer(a.dnormal())).epsilon(1e-12));
        CHECK(std::fabs(normalization_constant(a) - 1) * std::sqrt(static_cast<double>(n)) < 5);
    }

    ApproxParams degenerate = ap;
    degenerate.sigma = 0;
    CHECK_THROWS_AS(normalization_constant(degenerate), DomainError);
}

TEST_CASE("hypergeometric against discrete normal")
{
    double const tv100 = hyper_vs_dnormal_tv(100, 25, 50);
    CHECK(tv100 > 0);
    CHECK(tv100 <= 0.2);
    // Regression value
    CHECK(tv100 == doctest::Approx(4.77e-3).epsilon(0.01));

    for (std::int64_t n : {100, 1000, 10000, 100000})
    {
        double const tv = hyper_vs_dnormal_tv(n, n / 4, n / 2);
        CHECK(tv >= 0);
        CHECK(tv <= 1);
        // Bounded after scaling by sqrt(n)
        CHECK(tv * std::sqrt(static_cast<double>(n)) < 0.1);
    }
    // Off-center the skewness term makes TV of order n^{-1/2}
    double const a = hyper_vs_dnormal_tv(1000, 250, 300) * std::sqrt(1000.0);
    double const b = hyper_vs_dnormal_tv(100000, 25000, 30000) * std::sqrt(100000.0);
    CHECK(std::max(a, b) / std::min(a, b) < 3);
    CHECK(hyper_vs_dnormal_tv(10, 10, 3) == 0);
}

TEST_CASE("window constants")
{
    auto const half = window_constants(ApproxParams::make(1000, 500, 500));
    CHECK(half.f_bar == 0.5);
    CHECK(half.a == doctest::Approx(2.25));
    CHECK(half.delta_win == doctest::Approx(1 / 22.5));

    auto const small = window_constants(ApproxParams::make(1000000, 1, 500000));
    CHECK(small.a == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(small.delta_win == doctest::Approx(1 / 20.0));

    auto const ap = ApproxParams::make(100000, 25000, 50000);
    auto const w = window_constants(ap);
    double const edge = w.delta_win * ap.sigma;
    CHECK(w.L <= 12500);
    CHECK(w.R >= 12500);
    CHECK(ap.x_tilde(w.L) >= -edge);
    CHECK(ap.x_tilde(w.L - 1) < -edge);
    CHECK(ap.x_tilde(w.R) <= edge);
    CHECK(ap.x_tilde(w.R + 1) > edge);
}

TEST_CASE("central region partial sums")
{
    auto const ap = ApproxParams::make(10000, 2500, 3000);
    auto const w = window_constants(ap);
    double const edge = w.delta_win * ap.sigma;
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i)
    {
        grid.push_back(-edge * i / 10.0);
    }
    auto const report = central_region_check(ap, grid);
    CHECK(report.hypothesis_ok);
    double const tv = hyper_vs_dnormal_tv(10000, 2500, 3000);
    for (auto const& row : report.rows)
    {
        CHECK(row.partial_sum >= 0);
        CHECK(row.partial_sum <= 2 * tv + 1e-15);
        CHECK(row.j_x >= static_cast<std::int64_t>(std::floor(2500 * 0.3)));
        CHECK(row.c_hat == doctest::Approx(row.partial_sum / row.shape));
    }
    CHECK(report.max_c_hat > 0);
    CHECK_THROWS_AS(central_region_check(ap, {0.5}), DomainError);

    // Small sigma: the window holds only the mode
    auto const tiny = ApproxParams::make(40, 2, 20);
    auto const tiny_w = window_constants(tiny);
    double const tiny_edge = tiny_w.delta_win * tiny.sigma;
    auto const tiny_report = central_region_check(tiny, {-tiny_edge});
    CHECK(tiny_report.window.L == tiny_report.rows[0].j_x);
    CHECK(tiny_report.rows[0].partial_sum >= 0);
}

TEST_CASE("central region constant stays bounded off-center")
{
    double lo = 1e300;
    double hi = 0;
    for (std::int64_t n : {1000, 10000, 100000})
    {
        auto const ap = ApproxParams::make(n, n / 4, 3 * n / 10);
        double const edge = window_constants(ap).delta_win * ap.sigma;
        std::vector<double> grid;
        for (int i = 0; i <= 20; ++i)
        {
            grid.push_back(-edge * i / 20.0);
        }
        double const c = central_region_check(ap, grid).max_c_hat;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    CHECK(hi < 10 * lo);
}

TEST_CASE("four-chain setup")
{
    auto const s = FourChainSetup::make({400, 100}, 200, 190);
    CHECK(s.eta == 10);
    CHECK(s.ell == std::array<std::int64_t, 4>{200, 200, 190, 210});
    CHECK(s.p[3] == doctest::Approx(210.0 / 400));
    CHECK(s.sigma[2] == doctest::Approx(std::sqrt(100 * 0.475 * 0.525 * 0.75)));
}

TEST_CASE("one-step decomposition")
{
    auto const same = one_step_tv({400, 100}, 200, 200);
    REQUIRE(same.exact_tv);
    CHECK(*same.exact_tv == 0);
    CHECK(same.shift_term == 0);
    CHECK(same.center_term == 0);

    auto const near = one_step_tv({400, 100}, 200, 201);
    REQUIRE(near.exact_tv);
    CHECK(*near.exact_tv <= near.total_bound + 1e-9);
    CHECK(near.total_bound < 0.5);
    double sum = near.shift_term + near.center_term;
    for (double t : near.hyper_dn_terms)
    {
        sum += t;
    }
    CHECK(near.total_bound == doctest::Approx(sum));

    // Degenerate increments at the boundary are point masses
    auto const edge = one_step_tv({50, 10}, 0, 3);
    REQUIRE(edge.exact_tv);
    CHECK(*edge.exact_tv <= edge.total_bound + 1e-9);

    CHECK_FALSE(one_step_tv({20000, 5000}, 10000, 10011).exact_tv);
}

TEST_CASE("shift partition sums to twice the distance")
{
    for (auto [n, x0, y0] : {std::tuple{1000, 500, 505}, std::tuple{1000, 500, 480},
                             std::tuple{100000, 50000, 50017}, std::tuple{60, 3, 50}})
    {
        auto const setup = FourChainSetup::make({n, n / 4}, x0, y0);
        for (double K : {0.5, 2.0, 10.0})
        {
            auto const part = shift_partition(setup, K);
            CHECK(part.sum() == doctest::Approx(2 * part.tv).epsilon(1e-9));
            CHECK(part.t1 >= 0);
            CHECK(part.t3 >= 0);
        }
    }
}
