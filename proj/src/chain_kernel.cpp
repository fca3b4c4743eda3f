//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file chain_kernel.cpp
//---------------------------------------------------------------------------//
#include "blmix/chain_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "blmix/errors.hpp"
#include "blmix/kernels.hpp"
#include "blmix/parallel.hpp"

namespace blmix
{
namespace
{
std::size_t to_index(std::int64_t i)
{
    return static_cast<std::size_t>(i);
}

// d(t) may rise by rounding only
constexpr double monotone_slack = 1e-12;

}  // namespace

//---------------------------------------------------------------------------//
void ChainParams::validate() const
{
    require(n >= 1, "chain requires n >= 1");
    require(k >= 0 && k <= n, "chain requires 0 <= k <= n");
}

bool ChainParams::satisfies_c1(double delta) const
{
    require(delta > 0 && delta < 0.5, "delta must lie in (0, 1/2)");
    double const f = this->swap_fraction();
    return f > 0 && f < delta;
}

std::string_view to_string(StartPolicy policy)
{
    switch (policy)
    {
        case StartPolicy::all_states:
            return "all_states";
        case StartPolicy::state_zero:
            return "state_zero";
    }
    return "unknown";
}

MomentReport MomentReport::compare(int t, double lhs, double rhs)
{
    MomentReport r;
    r.t = t;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_err = std::fabs(lhs - rhs);
    if (rhs != 0)
    {
        r.rel_err = r.abs_err / std::fabs(rhs);
    }
    else
    {
        r.rel_err = r.abs_err == 0 ? 0 : std::numeric_limits<double>::infinity();
    }
    return r;
}

//---------------------------------------------------------------------------//
// Rows and stationary law
//---------------------------------------------------------------------------//
FinitePmf transition_row(ChainParams const& params, std::int64_t x, double tail_cut)
{
    params.validate();
    require(x >= 0 && x <= params.n, "state must lie in [0, n]");
    auto const from_right = hypergeom_pmf({params.n, params.n - x, params.k}, tail_cut);
    auto const from_left = hypergeom_pmf({params.n, x, params.k}, tail_cut);
    FinitePmf step = difference_law(from_right, from_left).shifted(x);
    if (step.lo() >= 0 && step.hi() <= params.n)
    {
        return step;
    }

    // The hypergeometric supports keep x + H1 - H0 in [0, n]; anything
    // outside is rounding and moves to lost mass.
    std::int64_t const lo = std::max<std::int64_t>(0, step.lo());
    std::int64_t const hi = std::min(params.n, step.hi());
    std::vector<double> clipped;
    double outside = 0;
    for (std::int64_t y = step.lo(); y <= step.hi(); ++y)
    {
        if (y < lo || y > hi)
        {
            outside += step(y);
        }
        else
        {
            clipped.push_back(step(y));
        }
    }
    if (outside > 1e-12)
    {
        throw std::logic_error("transition row leaked mass outside [0, n]");
    }
    return FinitePmf(lo, std::move(clipped), step.lost_mass() + outside);
}

FinitePmf stationary(ChainParams const& params, double tail_cut)
{
    params.validate();
    std::int64_t const n = params.n;
    double const log_norm = log_choose(2 * n, n);
    std::vector<double> w(to_index(n + 1));
    for (std::int64_t x = 0; x <= n; ++x)
    {
        w[to_index(x)] = std::exp(2 * log_choose(n, x) - log_norm);
    }
    double const total = kernels::sum(w);
    double const peak = w[to_index(n / 2)];
    double dropped = 0;
    for (double& v : w)
    {
        if (v < tail_cut * peak)
        {
            dropped += v;
            v = 0;
        }
    }
    // Trimming keeps a contiguous range since pi is unimodal
    for (double& v : w)
    {
        v /= total;
    }
    return FinitePmf(0, std::move(w), dropped / total);
}

ChainKernel::ChainKernel(ChainParams params)
    : params_(params)
    , tail_cut_(params.n <= dense_kernel_limit ? 0.0 : default_tail_cut)
    , stationary_(::blmix::stationary(params, tail_cut_))
    , row_once_(new std::once_flag[to_index(params.n + 1)])
    , rows_(to_index(params.n + 1))
{
}

FinitePmf const& ChainKernel::row(std::int64_t x) const
{
    require(x >= 0 && x <= params_.n, "state must lie in [0, n]");
    auto const i = to_index(x);
    std::call_once(row_once_[i], [&] {
        rows_[i] = std::make_unique<FinitePmf const>(transition_row(params_, x, tail_cut_));
    });
    return *rows_[i];
}

std::vector<std::vector<double>> ChainKernel::materialize() const
{
    if (params_.n > dense_kernel_limit)
    {
        throw InfeasibleSize("dense kernel refused for n = " + std::to_string(params_.n)
                             + " (limit " + std::to_string(dense_kernel_limit) + ")");
    }
    auto const dim = to_index(params_.n + 1);
    std::vector<std::vector<double>> dense(dim, std::vector<double>(dim, 0.0));
    for (std::int64_t x = 0; x <= params_.n; ++x)
    {
        auto const& r = this->row(x);
        for (std::int64_t y = r.lo(); y <= r.hi(); ++y)
        {
            dense[to_index(x)][to_index(y)] = r(y);
        }
    }
    return dense;
}

//---------------------------------------------------------------------------//
// Evolution and mixing profile
//---------------------------------------------------------------------------//
namespace
{
FinitePmf step_once(ChainKernel const& kernel, FinitePmf const& mu)
{
    auto const n = kernel.params().n;
    auto const dim = to_index(n + 1);
    std::vector<double> next(dim, 0.0);
    double lost = mu.lost_mass();
    std::int64_t lo = n;
    std::int64_t hi = 0;
    for (std::int64_t x = mu.lo(); x <= mu.hi(); ++x)
    {
        double const mass = mu(x);
        if (mass == 0)
        {
            continue;
        }
        auto const& r = kernel.row(x);
        std::span<double> dst(next.data() + r.lo(), r.size());
        kernels::axpy(mass, r.weights(), dst);
        lost += mass * r.lost_mass();
        lo = std::min(lo, r.lo());
        hi = std::max(hi, r.hi());
    }
    std::vector<double> support(next.begin() + lo, next.begin() + hi + 1);
    return FinitePmf(lo, std::move(support), lost);
}

}  // namespace

FinitePmf evolve(ChainKernel const& kernel, FinitePmf const& mu, int steps)
{
    require(steps >= 0, "steps must be nonnegative");
    require(mu.lo() >= 0 && mu.hi() <= kernel.params().n,
            "initial law must be supported in [0, n]");
    FinitePmf current = mu;
    for (int s = 0; s < steps; ++s)
    {
        current = step_once(kernel, current);
    }
    return current;
}

MixingProfile distance_profile(ChainKernel const& kernel, int t_max,
                               StartPolicy policy, unsigned threads)
{
    require(t_max >= 0, "t_max must be nonnegative");
    auto const& params = kernel.params();
    if (policy == StartPolicy::all_states && params.n > dense_kernel_limit)
    {
        throw InfeasibleSize("all-states profile refused for n = "
                             + std::to_string(params.n));
    }

    std::vector<std::int64_t> starts;
    if (policy == StartPolicy::all_states)
    {
        for (std::int64_t x = 0; x <= params.n; ++x)
        {
            starts.push_back(x);
        }
    }
    else
    {
        starts.push_back(0);
    }

    auto const len = to_index(t_max + 1);
    std::vector<std::vector<double>> per_start(starts.size());
    std::vector<double> lost(starts.size(), 0.0);
    parallel_chunks(starts.size(), threads, [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
        {
            auto& d = per_start[i];
            d.reserve(len);
            FinitePmf mu = FinitePmf::point_mass(starts[i]);
            for (int t = 0; t <= t_max; ++t)
            {
                if (t > 0)
                {
                    mu = step_once(kernel, mu);
                }
                d.push_back(tv_distance(mu, kernel.stationary()));
            }
            lost[i] = mu.lost_mass();
        }
    });

    MixingProfile profile;
    profile.params = params;
    profile.start_policy = policy;
    profile.d_values.assign(len, 0.0);
    for (std::size_t i = 0; i < starts.size(); ++i)
    {
        for (std::size_t t = 0; t < len; ++t)
        {
            profile.d_values[t] = std::max(profile.d_values[t], per_start[i][t]);
        }
        profile.lost_mass = std::max(profile.lost_mass, lost[i]);
    }
    for (std::size_t t = 1; t < len; ++t)
    {
        if (profile.d_values[t] > profile.d_values[t - 1] + monotone_slack)
        {
            throw std::logic_error("distance profile increased at t = " + std::to_string(t));
        }
    }
    return profile;
}

int t_mix(MixingProfile const& profile, double epsilon)
{
    require(epsilon > 0, "epsilon must be positive");
    if (epsilon >= 1)
    {
        return 0;
    }
    auto const& d = profile.d_values;
    for (std::size_t t = 0; t < d.size(); ++t)
    {
        if (d[t] <= epsilon)
        {
            return static_cast<int>(t);
        }
    }
    double const last = d.empty() ? 1.0 : d.back();
    throw HorizonExceeded("profile horizon " + std::to_string(d.size())
                              + " too short: d(t_max) = " + std::to_string(last),
                          last);
}

//---------------------------------------------------------------------------//
// Eigenfunctions and moments
//---------------------------------------------------------------------------//
double eigen_eval(ChainParams const& params, Eigenfunction kind, double x)
{
    double const n = static_cast<double>(params.n);
    switch (kind)
    {
        case Eigenfunction::f1:
            return 1 - 2 * x / n;
        case Eigenfunction::f2:
            require(params.n >= 2, "f2 requires n >= 2");
            return 1 - 2 * (2 * n - 1) * x / (n * n)
                   + 2 * (2 * n - 1) * x * (x - 1) / (n * n * (n - 1));
        case Eigenfunction::f3:
            return 1 - 2 * x * (n - x) / (n * n);
    }
    return 0;
}

double eigen_eval(ChainParams const& params, Eigenfunction kind, std::int64_t x)
{
    require(x >= 0 && x <= params.n, "state must lie in [0, n]");
    return eigen_eval(params, kind, static_cast<double>(x));
}

double expected_f1(ChainParams const& params, std::int64_t x0, int t)
{
    double const lambda1 = eigen_eval(params, Eigenfunction::f1, params.k);
    return std::pow(lambda1, t) * eigen_eval(params, Eigenfunction::f1, x0);
}

double expected_f1_squared(ChainParams const& params, std::int64_t x0, int t)
{
    double const n = static_cast<double>(params.n);
    double const lambda2 = eigen_eval(params, Eigenfunction::f2, params.k);
    return 1 / (2 * n - 1)
           + (2 * n - 2) / (2 * n - 1) * std::pow(lambda2, t)
                 * eigen_eval(params, Eigenfunction::f2, x0);
}

std::vector<std::pair<MomentReport, MomentReport>>
moment_identity_series(ChainKernel const& kernel, std::int64_t x0, int t_max)
{
    auto const& params = kernel.params();
    require(params.n >= 2, "moment identities require n >= 2");
    require(t_max >= 0, "t_max must be nonnegative");
    auto f1 = [&](std::int64_t y) { return eigen_eval(params, Eigenfunction::f1, y); };

    std::vector<std::pair<MomentReport, MomentReport>> out;
    FinitePmf mu = FinitePmf::point_mass(x0);
    for (int t = 0; t <= t_max; ++t)
    {
        if (t > 0)
        {
            mu = evolve(kernel, mu, 1);
        }
        double const m1 = mu.expect(f1);
        double const m2 = mu.expect([&](std::int64_t y) {
            double v = f1(y);
            return v * v;
        });
        out.emplace_back(MomentReport::compare(t, m1, expected_f1(params, x0, t)),
                         MomentReport::compare(t, m2, expected_f1_squared(params, x0, t)));
    }
    return out;
}

std::pair<MomentReport, MomentReport>
verify_moment_identities(ChainKernel const& kernel, std::int64_t x0, int t)
{
    return moment_identity_series(kernel, x0, t).back();
}

//---------------------------------------------------------------------------//
// Lower bound
//---------------------------------------------------------------------------//
double lower_bound_certificate(ChainParams const& params, int t)
{
    params.validate();
    require(params.n >= 2, "certificate requires n >= 2");
    require(t >= 0, "t must be nonnegative");
    double const n = static_cast<double>(params.n);

    // f = sqrt(n-1) f1; moments from the eigenfunction identities
    double const mean0 = std::fabs(std::sqrt(n - 1) * expected_f1(params, 0, t));
    double const var0
        = std::max(0.0, (n - 1) * expected_f1_squared(params, 0, t) - mean0 * mean0);
    double const var_pi = (n - 1) / (2 * n - 1);

    double best = 0;
    for (int i = 0; i <= 20; ++i)
    {
        double const alpha = std::ldexp(1.0, i);
        for (int j = 0; j <= 20; ++j)
        {
            double const r = std::ldexp(1.0, j);
            // {|f| <= alpha} and {|f - mean0| <= r sd0} must be disjoint
            if (mean0 - r * std::sqrt(var0) > alpha)
            {
                best = std::max(best, 1 - var_pi / (alpha * alpha) - 1 / (r * r));
            }
        }
    }
    return std::clamp(best, 0.0, 1.0);
}

}  // namespace blmix
