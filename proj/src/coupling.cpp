//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file coupling.cpp
//---------------------------------------------------------------------------//
#include "blmix/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blmix/distributions.hpp"
#include "blmix/errors.hpp"
#include "blmix/parallel.hpp"

namespace blmix
{
namespace
{
std::int64_t abs_diff(std::int64_t a, std::int64_t b)
{
    return a > b ? a - b : b - a;
}

void require_state(ChainParams const& params, std::int64_t x)
{
    require(x >= 0 && x <= params.n, "state must lie in [0, n]");
}

/*!
 * Block counts of one coupled step, with lo <= hi the ordered positions.
 *
 * Left urns are labeled 1..n with reds first, so the selection A meets the
 * blocks [1, lo], (lo, hi], (hi, n]. Right urns are labeled n+1..2n with reds
 * first; the hi-chain has reds n+1..2n-hi and the lo-chain n+1..2n-lo, so B
 * meets [n+1, 2n-hi], (2n-hi, 2n-lo], (2n-lo, 2n].
 */
struct BlockCounts
{
    std::int64_t a{0};   //!< |A ∩ [1, lo]|
    std::int64_t c1{0};  //!< |A ∩ (lo, hi]|
    std::int64_t b{0};   //!< |B ∩ [n+1, 2n-hi]|
    std::int64_t c2{0};  //!< |B ∩ (2n-hi, 2n-lo]|
};

CoupledState apply_counts(CoupledState s, BlockCounts const& c)
{
    bool const ordered = s.x <= s.y;
    std::int64_t const lo = ordered ? s.x : s.y;
    std::int64_t const hi = ordered ? s.y : s.x;
    std::int64_t const lo_next = lo - c.a + c.b + c.c2;
    std::int64_t const hi_next = hi - c.a - c.c1 + c.b;
    return ordered ? CoupledState{lo_next, hi_next} : CoupledState{hi_next, lo_next};
}

// Hypergeometric stages of the block-count reformulation
HypergeomParams stage_a(ChainParams const& p, std::int64_t lo)
{
    return {p.n, lo, p.k};
}
HypergeomParams stage_c1(ChainParams const& p, std::int64_t lo, std::int64_t hi,
                         std::int64_t a)
{
    return {p.n - lo, hi - lo, p.k - a};
}
HypergeomParams stage_b(ChainParams const& p, std::int64_t hi)
{
    return {p.n, p.n - hi, p.k};
}
HypergeomParams stage_c2(ChainParams const& p, std::int64_t lo, std::int64_t hi,
                         std::int64_t b)
{
    return {hi, hi - lo, p.k - b};
}

// Draw a hypergeometric, treating an empty population as the zero draw
std::int64_t draw(HypergeomParams const& hp, RngStream& rng)
{
    if (hp.population == 0)
    {
        return 0;
    }
    return sample_hypergeom(hp, rng);
}

FinitePmf law(HypergeomParams const& hp)
{
    if (hp.population == 0)
    {
        return FinitePmf::point_mass(0);
    }
    return hypergeom_pmf(hp, 0);
}

}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(StoppingKind kind)
{
    switch (kind)
    {
        case StoppingKind::tau_couple:
            return "tau_couple";
        case StoppingKind::tau1:
            return "tau1";
        case StoppingKind::tau3:
            return "tau3";
        case StoppingKind::tau4:
            return "tau4";
    }
    return "unknown";
}

std::optional<StoppingKind> stopping_kind_from_string(std::string_view name)
{
    for (auto kind : {StoppingKind::tau_couple, StoppingKind::tau1, StoppingKind::tau3,
                      StoppingKind::tau4})
    {
        if (to_string(kind) == name)
        {
            return kind;
        }
    }
    return std::nullopt;
}

void StoppingSpec::validate() const
{
    require(kappa > 0, "kappa must be positive");
    if (kind == StoppingKind::tau_couple)
    {
        require(r > 0, "distance threshold r must be positive");
    }
    else
    {
        require(schedule.n >= 3, "stopping time requires a schedule");
    }
}

double StoppingSpec::closeness() const
{
    double const n = static_cast<double>(schedule.n);
    return std::sqrt(n) / std::log(std::log(n));
}

double StoppingSpec::band_halfwidth() const
{
    double const n = static_cast<double>(schedule.n);
    return kind == StoppingKind::tau3 ? kappa * schedule.r_n : kappa * std::sqrt(n);
}

int StoppingSpec::default_horizon() const
{
    switch (kind)
    {
        case StoppingKind::tau1:
            return static_cast<int>(std::floor(schedule.t_n));
        case StoppingKind::tau3:
            return static_cast<int>(std::floor(schedule.s_n));
        case StoppingKind::tau4:
            return static_cast<int>(std::floor(2 * schedule.s_n));
        case StoppingKind::tau_couple:
            break;
    }
    return static_cast<int>(std::ceil(schedule.t_n + 3 * schedule.s_n));
}

//---------------------------------------------------------------------------//
// Steps
//---------------------------------------------------------------------------//
std::int64_t chain_step(ChainParams const& params, std::int64_t x, RngStream& rng)
{
    std::int64_t const from_left = sample_hypergeom({params.n, x, params.k}, rng);
    std::int64_t const from_right = sample_hypergeom({params.n, params.n - x, params.k}, rng);
    return x - from_left + from_right;
}

CoupledState coupled_step(ChainParams const& params, CoupledState s, RngStream& rng)
{
    std::int64_t const lo = std::min(s.x, s.y);
    std::int64_t const hi = std::max(s.x, s.y);
    BlockCounts c;
    c.a = draw(stage_a(params, lo), rng);
    c.c1 = draw(stage_c1(params, lo, hi, c.a), rng);
    c.b = draw(stage_b(params, hi), rng);
    c.c2 = draw(stage_c2(params, lo, hi, c.b), rng);
    return apply_counts(s, c);
}

std::map<std::pair<std::int64_t, std::int64_t>, double>
coupled_step_law(ChainParams const& params, CoupledState s)
{
    params.validate();
    require_state(params, s.x);
    require_state(params, s.y);
    std::int64_t const lo = std::min(s.x, s.y);
    std::int64_t const hi = std::max(s.x, s.y);

    std::map<std::pair<std::int64_t, std::int64_t>, double> out;
    auto const pa = law(stage_a(params, lo));
    auto const pb = law(stage_b(params, hi));
    for (auto a = pa.lo(); a <= pa.hi(); ++a)
    {
        auto const pc1 = law(stage_c1(params, lo, hi, a));
        for (auto c1 = pc1.lo(); c1 <= pc1.hi(); ++c1)
        {
            for (auto b = pb.lo(); b <= pb.hi(); ++b)
            {
                auto const pc2 = law(stage_c2(params, lo, hi, b));
                for (auto c2 = pc2.lo(); c2 <= pc2.hi(); ++c2)
                {
                    double const w = pa(a) * pc1(c1) * pb(b) * pc2(c2);
                    if (w == 0)
                    {
                        continue;
                    }
                    auto const next = apply_counts(s, {a, c1, b, c2});
                    out[{next.x, next.y}] += w;
                }
            }
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// Survival estimators
//---------------------------------------------------------------------------//
double binomial_ci_halfwidth(double p_hat, std::int64_t replicas)
{
    double const r = static_cast<double>(replicas);
    return std::max(1.96 * std::sqrt(p_hat * (1 - p_hat) / r), 1.96 / (2 * r));
}

double contraction_bound(ChainParams const& params, std::int64_t x0, std::int64_t y0,
                         double r, int t)
{
    double const rate = eigen_eval(params, Eigenfunction::f3, params.k);
    double const bound = std::pow(rate, t) * static_cast<double>(abs_diff(x0, y0)) / r;
    return std::clamp(bound, 0.0, 1.0);
}

namespace
{
// P(|X_t - n/2| >= h) <= n^2 E f1(X_t)^2 / (4 h^2)
double band_exit_bound(ChainParams const& params, std::int64_t x0, int t, double h)
{
    double const n = static_cast<double>(params.n);
    return std::min(1.0, n * n * expected_f1_squared(params, x0, t) / (4 * h * h));
}

bool in_band(ChainParams const& params, std::int64_t x, double h)
{
    return std::fabs(static_cast<double>(x) - static_cast<double>(params.n) / 2) < h;
}

/*!
 * Simulate coupled replicas until `hit` holds or t_max passes.
 *
 * Returns hit counts per t; entries sum to the number of replicas stopped
 * by t_max. Contraction of |X - Y| is checked on every step.
 */
template<class Hit>
std::vector<std::int64_t> hitting_histogram(ChainParams const& params, CoupledState start,
                                            int t_max, MonteCarlo const& mc, Hit&& hit)
{
    require(mc.replicas >= 1, "replicas must be at least 1");
    require(t_max >= 0, "horizon must be nonnegative");
    auto const bins = static_cast<std::size_t>(t_max + 1);
    unsigned const workers = static_cast<unsigned>(
        std::clamp<std::int64_t>(mc.replicas, 1, std::max(1u, mc.threads)));
    std::vector<std::vector<std::int64_t>> local(workers, std::vector<std::int64_t>(bins, 0));

    parallel_chunks(static_cast<std::size_t>(mc.replicas), workers,
                    [&](unsigned w, std::size_t begin, std::size_t end) {
                        auto& counts = local[w];
                        for (std::size_t rep = begin; rep < end; ++rep)
                        {
                            RngStream rng(mc.master_seed, rep);
                            CoupledState s = start;
                            for (int t = 0; t <= t_max; ++t)
                            {
                                if (t > 0)
                                {
                                    auto next = coupled_step(params, s, rng);
                                    if (abs_diff(next.x, next.y) > abs_diff(s.x, s.y))
                                    {
                                        throw std::logic_error(
                                            "coupled distance increased");
                                    }
                                    s = next;
                                }
                                if (hit(s))
                                {
                                    ++counts[static_cast<std::size_t>(t)];
                                    break;
                                }
                            }
                        }
                    });

    std::vector<std::int64_t> total(bins, 0);
    for (auto const& counts : local)
    {
        for (std::size_t t = 0; t < bins; ++t)
        {
            total[t] += counts[t];
        }
    }
    return total;
}

SurvivalEstimate survival_from_histogram(std::vector<std::int64_t> const& hits,
                                         std::int64_t replicas)
{
    SurvivalEstimate est;
    std::int64_t alive = replicas;
    for (std::size_t t = 0; t < hits.size(); ++t)
    {
        alive -= hits[t];
        double const p = static_cast<double>(alive) / static_cast<double>(replicas);
        est.t_grid.push_back(static_cast<int>(t));
        est.empirical_survival.push_back(p);
        est.ci_halfwidth.push_back(binomial_ci_halfwidth(p, replicas));
    }
    return est;
}

}  // namespace

SurvivalEstimate survival_vs_bound(ChainParams const& params, std::int64_t x0,
                                   std::int64_t y0, double r, int t_max,
                                   MonteCarlo const& mc)
{
    params.validate();
    require_state(params, x0);
    require_state(params, y0);
    require(r > 0, "distance threshold r must be positive");

    auto const hits = hitting_histogram(params, {x0, y0}, t_max, mc, [r](CoupledState s) {
        return static_cast<double>(abs_diff(s.x, s.y)) <= r;
    });
    auto est = survival_from_histogram(hits, mc.replicas);
    for (int t : est.t_grid)
    {
        est.theoretical_bound.push_back(contraction_bound(params, x0, y0, r, t));
    }
    return est;
}

SurvivalEstimate stopping_tail(ChainParams const& params, StoppingSpec const& spec,
                               std::int64_t x0, std::int64_t y0, int horizon,
                               MonteCarlo const& mc)
{
    params.validate();
    spec.validate();
    require_state(params, x0);
    require_state(params, y0);
    if (spec.kind == StoppingKind::tau_couple)
    {
        require(horizon >= 0 || spec.schedule.n >= 3,
                "tau_couple needs an explicit horizon or a schedule");
    }
    int const t_max = horizon >= 0 ? horizon : spec.default_horizon();

    double const close = spec.kind == StoppingKind::tau_couple ? spec.r : spec.closeness();
    bool const needs_close = spec.kind != StoppingKind::tau1;
    bool const needs_band = spec.kind != StoppingKind::tau_couple;
    double const h = needs_band ? spec.band_halfwidth() : 0;

    auto const hits = hitting_histogram(params, {x0, y0}, t_max, mc, [&](CoupledState s) {
        if (needs_close && static_cast<double>(abs_diff(s.x, s.y)) > close)
        {
            return false;
        }
        return !needs_band || (in_band(params, s.x, h) && in_band(params, s.y, h));
    });
    auto est = survival_from_histogram(hits, mc.replicas);

    // Union bound: not close (contraction) or either chain outside the band
    // (Chebyshev on the exact second moment of f1)
    for (int t : est.t_grid)
    {
        double bound = 0;
        if (needs_close)
        {
            bound += contraction_bound(params, x0, y0, close, t);
        }
        if (needs_band)
        {
            bound += band_exit_bound(params, x0, t, h) + band_exit_bound(params, y0, t, h);
        }
        est.theoretical_bound.push_back(std::min(1.0, bound));
    }
    return est;
}

double band_excursion(ChainParams const& params, Schedule const& schedule,
                      std::int64_t x0, double r, int s, MonteCarlo const& mc)
{
    params.validate();
    require_state(params, x0);
    require(r > 0, "band half-width must be positive");
    require(s >= 0, "window start must be nonnegative");
    require(mc.replicas >= 1, "replicas must be at least 1");

    int const window_end = s + static_cast<int>(std::floor(schedule.s_n));
    double const center = static_cast<double>(params.n) / 2;
    unsigned const workers = static_cast<unsigned>(
        std::clamp<std::int64_t>(mc.replicas, 1, std::max(1u, mc.threads)));
    std::vector<std::int64_t> exits(workers, 0);

    parallel_chunks(static_cast<std::size_t>(mc.replicas), workers,
                    [&](unsigned w, std::size_t begin, std::size_t end) {
                        for (std::size_t rep = begin; rep < end; ++rep)
                        {
                            RngStream rng(mc.master_seed, rep);
                            std::int64_t x = x0;
                            for (int t = 0; t <= window_end; ++t)
                            {
                                if (t > 0)
                                {
                                    x = chain_step(params, x, rng);
                                }
                                if (t >= s && std::fabs(static_cast<double>(x) - center) > r)
                                {
                                    ++exits[w];
                                    break;
                                }
                            }
                        }
                    });

    std::int64_t total = 0;
    for (auto e : exits)
    {
        total += e;
    }
    return static_cast<double>(total) / static_cast<double>(mc.replicas);
}

}  // namespace blmix
