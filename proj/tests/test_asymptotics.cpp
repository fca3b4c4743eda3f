//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/test_asymptotics.cpp
//---------------------------------------------------------------------------//
#include <cmath>

#include <doctest.h>

#include "blmix/asymptotics.hpp"
#include "blmix/errors.hpp"

using namespace blmix;

TEST_CASE("schedule quantities")
{
    auto const s = make_schedule(10000, 2500, 0.25);
    double const log_n = std::log(10000.0);
    CHECK(s.delta_n == 0);
    CHECK(s.t_n == doctest::Approx(log_n / (2 * std::log(2.0))).epsilon(1e-14));
    CHECK(s.s_n == doctest::Approx(4 * std::log(log_n)).epsilon(1e-14));
    CHECK(s.p_lambda == doctest::Approx(8 * std::log(0.5)).epsilon(1e-14));
    CHECK(s.r_n == doctest::Approx(100 * std::pow(log_n, 4 * std::log(2.0))).epsilon(1e-12));

    // f2(k) = 1 - 2 h1 and (1 - 2 lambda)^2 = 1 - 2 h2
    double const n = 10000;
    double const k = 2500;
    double const f2k = 1 - 2 * (2 * n - 1) * k / (n * n)
                       + 2 * (2 * n - 1) * k * (k - 1) / (n * n * (n - 1));
    CHECK(s.delta_prime == doctest::Approx((1 - f2k) / 2 - (1 - 0.25) / 2).epsilon(1e-12));
    CHECK(s.delta_dprime == doctest::Approx(0.0));
    CHECK(s.chain().k == 2500);
}

TEST_CASE("schedule domain")
{
    CHECK_THROWS_AS(make_schedule(100, 25, 0.5), DomainError);
    CHECK_THROWS_AS(make_schedule(100, 25, 0.0), DomainError);
    CHECK_THROWS_AS(make_schedule(2, 1, 0.25), DomainError);
    CHECK_THROWS_AS(lower_bound_constant(0.25, 0.0), DomainError);
}

TEST_CASE("lower-bound constant")
{
    double const ref = (std::log(std::sqrt(3.0) + 100) - 0.5 * std::log(0.25)) / std::log(2.0);
    CHECK(lower_bound_constant(0.25, 0.25) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(lower_bound_constant(0.25, 0.75) < lower_bound_constant(0.25, 0.25));
}

TEST_CASE("rate condition diagnostics")
{
    std::vector<std::int64_t> const ns{1000, 10000, 100000, 1000000};
    auto const exact = assumption1_report(
        ns, [](std::int64_t n) { return n / 4; }, 0.25, 0.3);
    CHECK(exact.all_c1_ok);
    CHECK(exact.vanishing);
    CHECK(exact.envelope.size() == ns.size());
    CHECK_FALSE(exact.note.empty());

    // Delta_n = 1/log n keeps |Delta_n log n| near one
    auto const slow = assumption1_report(
        ns,
        [](std::int64_t n) {
            double const nn = static_cast<double>(n);
            return static_cast<std::int64_t>(std::floor((0.25 + 1 / std::log(nn)) * nn));
        },
        0.25, 0.49);
    CHECK_FALSE(slow.vanishing);
    for (auto const& row : slow.rows)
    {
        CHECK(row.delta_log_n == doctest::Approx(1.0).epsilon(0.01));
    }

    auto const too_big = assumption1_report(
        ns, [](std::int64_t n) { return n / 2; }, 0.25, 0.3);
    CHECK_FALSE(too_big.all_c1_ok);

    CHECK_THROWS_AS(
        assumption1_report({100, 100}, [](std::int64_t n) { return n / 4; }, 0.25, 0.3),
        DomainError);
}

TEST_CASE("f1 expansion residual is second order in Delta")
{
    auto const a = make_schedule(10000, 2600, 0.25);
    auto const b = make_schedule(10000, 2550, 0.25);
    for (int t : {1, 3, 6})
    {
        auto const ra = eigen_expansion(a, Eigenfunction::f1, t);
        auto const rb = eigen_expansion(b, Eigenfunction::f1, t);
        CHECK(ra.exact == doctest::Approx(std::pow(1 - 2 * 0.26, t)).epsilon(1e-12));
        CHECK(ra.leading == doctest::Approx(std::pow(0.5, t)).epsilon(1e-14));
        if (t == 1)
        {
            CHECK(std::fabs(ra.residual) < 1e-15);
        }
        else
        {
            double const ratio = ra.residual / rb.residual;
            CHECK(ratio > 3.5);
            CHECK(ratio < 4.5);
        }
        CHECK(ra.outside_hypothesis == (t > a.t_n));
    }
    auto const r = eigen_expansion(a, Eigenfunction::f3, 2);
    CHECK(r.leading == doctest::Approx(std::pow(1 - 0.5 + 0.125, 2)));
}

TEST_CASE("f2 near the center scales like (log n)^q / n")
{
    std::vector<std::int64_t> const ns{1000, 10000, 100000, 1000000};
    auto const report = f2_asymptotic_check(ns, 1.0, {2.0});
    REQUIRE(report.rows.size() == ns.size());
    for (auto const& row : report.rows)
    {
        double const n = static_cast<double>(row.n);
        double const x = n / 2 + row.offset;
        double const f2 = 1 - 2 * (2 * n - 1) * x / (n * n)
                          + 2 * (2 * n - 1) * x * (x - 1) / (n * n * (n - 1));
        CHECK(row.f2 == doctest::Approx(f2).epsilon(1e-9));
        // 4 c^2 minus a 1/log n correction
        CHECK(row.ratio == doctest::Approx(16.0).epsilon(0.05));
    }
    CHECK(report.spread < 1.05);
}
