//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file asymptotics.cpp
//---------------------------------------------------------------------------//
#include "blmix/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blmix/errors.hpp"

namespace blmix
{
namespace
{
void require_lambda(double lambda)
{
    require(lambda > 0 && lambda < 0.5, "lambda must lie in the open interval (0, 1/2)");
}

}  // namespace

Schedule make_schedule(std::int64_t n, std::int64_t k, double lambda)
{
    require_lambda(lambda);
    require(n >= 3, "schedule requires n >= 3 so that log log n > 0");
    ChainParams{n, k}.validate();

    double const nn = static_cast<double>(n);
    double const log_n = std::log(nn);
    double const f = static_cast<double>(k) / nn;

    Schedule s;
    s.n = n;
    s.k = k;
    s.lambda = lambda;
    s.delta_n = f - lambda;
    s.t_n = log_n / (2 * std::fabs(std::log(1 - 2 * lambda)));
    s.s_n = std::log(log_n) / lambda;
    s.p_lambda = std::log(1 - 2 * lambda) * (2 / lambda);
    s.r_n = std::sqrt(nn) * std::pow(log_n, std::fabs(s.p_lambda) / 2);

    double const h1 = (1 - eigen_eval(s.chain(), Eigenfunction::f2, k)) / 2;
    double const h2 = (1 - (1 - 2 * lambda) * (1 - 2 * lambda)) / 2;
    s.delta_prime = h1 - h2;
    s.delta_dprime = static_cast<double>(k) * static_cast<double>(n - k) / (nn * nn)
                     - (lambda - lambda * lambda);
    return s;
}

double lower_bound_constant(double lambda, double epsilon)
{
    require_lambda(lambda);
    require(epsilon > 0, "epsilon must be positive");
    return (std::log(std::sqrt(3.0) + 100) - 0.5 * std::log(epsilon))
           / std::fabs(std::log(1 - 2 * lambda));
}

AssumptionReport assumption1_report(std::vector<std::int64_t> const& ns,
                                    std::function<std::int64_t(std::int64_t)> const& k_of_n,
                                    double lambda, double delta)
{
    require_lambda(lambda);
    require(delta > 0 && delta < 0.5, "delta must lie in (0, 1/2)");
    require(!ns.empty(), "n sequence must be nonempty");
    require(std::is_sorted(ns.begin(), ns.end())
                && std::adjacent_find(ns.begin(), ns.end()) == ns.end(),
            "n sequence must be strictly increasing");

    AssumptionReport report;
    report.all_c1_ok = true;
    for (auto n : ns)
    {
        require(n >= 2, "n must be at least 2");
        AssumptionRow row;
        row.n = n;
        row.k = k_of_n(n);
        ChainParams{n, row.k}.validate();
        row.c1_ok = ChainParams{n, row.k}.satisfies_c1(delta);
        row.delta_n = static_cast<double>(row.k) / static_cast<double>(n) - lambda;
        row.delta_log_n = row.delta_n * std::log(static_cast<double>(n));
        report.all_c1_ok = report.all_c1_ok && row.c1_ok;
        report.rows.push_back(row);
    }

    report.envelope.resize(report.rows.size());
    double sup = 0;
    for (std::size_t i = report.rows.size(); i-- > 0;)
    {
        sup = std::max(sup, std::fabs(report.rows[i].delta_log_n));
        report.envelope[i] = sup;
    }
    double const first = report.envelope.front();
    double const last = report.envelope.back();
    report.vanishing = first < 1e-9 || last <= 0.5 * first;
    report.note = "finite n-sequences cannot certify Delta_n = o(1/log n); "
                  "vanishing reflects the trend of sup_{m>=n} |Delta_m log m| only";
    return report;
}

ExpansionReport eigen_expansion(Schedule const& schedule, Eigenfunction which, int t)
{
    require(t >= 0, "t must be nonnegative");
    double const lambda = schedule.lambda;
    require(1 - 2 * lambda != 0, "expansion requires lambda != 1/2");

    double base = 0;
    double deviation = 0;
    switch (which)
    {
        case Eigenfunction::f1:
            base = 1 - 2 * lambda;
            deviation = schedule.delta_n;
            break;
        case Eigenfunction::f2:
            base = (1 - 2 * lambda) * (1 - 2 * lambda);
            deviation = schedule.delta_prime;
            break;
        case Eigenfunction::f3:
            base = 1 - 2 * lambda + 2 * lambda * lambda;
            deviation = schedule.delta_dprime;
            break;
    }

    ExpansionReport r;
    r.t = t;
    r.exact = std::pow(eigen_eval(schedule.chain(), which, schedule.k), t);
    r.leading = std::pow(base, t);
    r.corrected = r.leading * (1 - 2 * t * deviation / (1 - 2 * lambda));
    r.residual = r.exact - r.corrected;
    r.outside_hypothesis = t > schedule.t_n;
    return r;
}

F2AsymptoticReport f2_asymptotic_check(std::vector<std::int64_t> const& ns, double q,
                                       std::vector<double> const& offset_multipliers)
{
    require(q >= 0, "q must be nonnegative");
    F2AsymptoticReport report;
    report.min_abs_ratio = std::numeric_limits<double>::infinity();
    for (auto n : ns)
    {
        require(n >= 3, "n must be at least 3");
        double const nn = static_cast<double>(n);
        double const log_n = std::log(nn);
        double const scale = std::pow(log_n, q) / nn;
        for (double c : offset_multipliers)
        {
            F2AsymptoticRow row;
            row.n = n;
            row.offset = c * std::sqrt(nn) * std::pow(log_n, q / 2);
            row.f2 = eigen_eval(ChainParams{n, 0}, Eigenfunction::f2, nn / 2 + row.offset);
            row.ratio = row.f2 / scale;
            double const a = std::fabs(row.ratio);
            report.max_abs_ratio = std::max(report.max_abs_ratio, a);
            if (a > 0)
            {
                report.min_abs_ratio = std::min(report.min_abs_ratio, a);
            }
            report.rows.push_back(row);
        }
    }
    report.spread = report.max_abs_ratio / report.min_abs_ratio;
    return report;
}

}  // namespace blmix
