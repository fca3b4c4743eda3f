//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file distributions.cpp
//---------------------------------------------------------------------------//
#include "blmix/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "blmix/errors.hpp"
#include "blmix/kernels.hpp"

namespace blmix
{
namespace
{
constexpr std::int64_t log_factorial_table_size = 4096;

// Stop accumulating dropped tail mass once the remaining geometric bound is
// below this (in units of the mode weight)
constexpr double tail_accounting_floor = 1e-30;

std::size_t to_index(std::int64_t i)
{
    return static_cast<std::size_t>(i);
}

}  // namespace

//---------------------------------------------------------------------------//
// FinitePmf
//---------------------------------------------------------------------------//
FinitePmf::FinitePmf() : offset_(0), weights_{1.0} {}

FinitePmf::FinitePmf(std::int64_t offset, std::vector<double> weights, double lost_mass)
    : offset_(offset), weights_(std::move(weights)), lost_mass_(lost_mass)
{
    for (double w : weights_)
    {
        require(std::isfinite(w) && w >= 0, "pmf weights must be finite and nonnegative");
    }
    require(std::isfinite(lost_mass_) && lost_mass_ >= 0, "lost mass must be nonnegative");

    auto first = std::find_if(weights_.begin(), weights_.end(), [](double w) { return w > 0; });
    require(first != weights_.end(), "pmf must have positive mass");
    auto last = std::find_if(weights_.rbegin(), weights_.rend(), [](double w) {
                    return w > 0;
                }).base();
    offset_ += first - weights_.begin();
    weights_.erase(last, weights_.end());
    weights_.erase(weights_.begin(), first);

    double const mass = this->total() + lost_mass_;
    require(std::fabs(mass - 1) <= 1e-9,
            "pmf weights plus lost mass must sum to one (got " + std::to_string(mass) + ")");
}

FinitePmf FinitePmf::from_unnormalized(std::int64_t offset, std::vector<double> weights)
{
    double total = 0;
    for (double w : weights)
    {
        require(std::isfinite(w) && w >= 0, "pmf weights must be finite and nonnegative");
        total += w;
    }
    require(total > 0, "pmf must have positive mass");
    for (double& w : weights)
    {
        w /= total;
    }
    return FinitePmf(offset, std::move(weights));
}

FinitePmf FinitePmf::point_mass(std::int64_t at)
{
    return FinitePmf(at, {1.0});
}

double FinitePmf::total() const
{
    return kernels::sum(weights_);
}

double FinitePmf::mean() const
{
    return this->expect([](std::int64_t j) { return static_cast<double>(j); });
}

double FinitePmf::variance() const
{
    double const m = this->mean();
    return this->expect([m](std::int64_t j) {
        double d = static_cast<double>(j) - m;
        return d * d;
    });
}

FinitePmf FinitePmf::shifted(std::int64_t by) const
{
    FinitePmf result = *this;
    result.offset_ += by;
    return result;
}

FinitePmf FinitePmf::renormalized() const
{
    return from_unnormalized(offset_, weights_);
}

//---------------------------------------------------------------------------//
// Parameter types
//---------------------------------------------------------------------------//
void HypergeomParams::validate() const
{
    require(population >= 1, "hypergeometric population must be positive");
    require(successes >= 0 && successes <= population,
            "hypergeometric successes must lie in [0, population]");
    require(draws >= 0 && draws <= population,
            "hypergeometric draws must lie in [0, population]");
}

std::int64_t HypergeomParams::lo() const
{
    return std::max<std::int64_t>(0, draws - (population - successes));
}

std::int64_t HypergeomParams::hi() const
{
    return std::min(draws, successes);
}

std::int64_t HypergeomParams::mode() const
{
    std::int64_t m = (draws + 1) * (successes + 1) / (population + 2);
    return std::clamp(m, this->lo(), this->hi());
}

double HypergeomParams::mean() const
{
    return static_cast<double>(draws) * static_cast<double>(successes)
           / static_cast<double>(population);
}

double HypergeomParams::variance() const
{
    if (population == 1)
    {
        return 0;
    }
    double const pop = static_cast<double>(population);
    double const p = static_cast<double>(successes) / pop;
    double const m = static_cast<double>(draws);
    return m * p * (1 - p) * (pop - m) / (pop - 1);
}

//---------------------------------------------------------------------------//
// Special functions
//---------------------------------------------------------------------------//
double log_factorial(std::int64_t n)
{
    require(n >= 0, "log_factorial requires n >= 0");
    static std::vector<double> const table = [] {
        std::vector<double> t(log_factorial_table_size);
        for (std::int64_t i = 0; i < log_factorial_table_size; ++i)
        {
            t[to_index(i)] = std::lgamma(static_cast<double>(i) + 1);
        }
        return t;
    }();
    if (n < log_factorial_table_size)
    {
        return table[to_index(n)];
    }
    // Stirling series; truncation error below 1/(1680 n^7)
    double const x = static_cast<double>(n);
    double const inv = 1 / x;
    double const inv2 = inv * inv;
    double const series = inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 / 1260));
    return x * std::log(x) - x + 0.5 * std::log(2 * std::numbers::pi * x) + series;
}

double log_choose(std::int64_t n, std::int64_t k)
{
    if (k < 0 || k > n || n < 0)
    {
        return -std::numeric_limits<double>::infinity();
    }
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

//---------------------------------------------------------------------------//
// Hypergeometric
//---------------------------------------------------------------------------//
namespace
{
// P(j + 1) / P(j)
double hyper_ratio_up(HypergeomParams const& hp, std::int64_t j)
{
    double const num = static_cast<double>(hp.successes - j)
                       * static_cast<double>(hp.draws - j);
    double const den = static_cast<double>(j + 1)
                       * static_cast<double>(hp.population - hp.successes
                                             - hp.draws + j + 1);
    return num / den;
}

// P(j - 1) / P(j)
double hyper_ratio_down(HypergeomParams const& hp, std::int64_t j)
{
    double const num = static_cast<double>(j)
                       * static_cast<double>(hp.population - hp.successes
                                             - hp.draws + j);
    double const den = static_cast<double>(hp.successes - j + 1)
                       * static_cast<double>(hp.draws - j + 1);
    return num / den;
}

/*!
 * Walk one side of a unimodal pmf away from the mode.
 *
 * Appends relative weights (mode weight = 1) while they are at least
 * `tail_cut`; returns the mass of the dropped remainder.
 */
template<class Ratio>
double walk_side(std::int64_t mode, std::int64_t end, int step, Ratio&& ratio,
                 double tail_cut, std::vector<double>& kept)
{
    double w = 1;
    double dropped = 0;
    bool cutting = false;
    for (std::int64_t j = mode; j != end; j += step)
    {
        double const r = ratio(j);
        w *= r;
        if (w == 0)
        {
            break;
        }
        if (!cutting && w < tail_cut)
        {
            cutting = true;
        }
        if (!cutting)
        {
            kept.push_back(w);
            continue;
        }
        dropped += w;
        // Beyond the mode the ratios decrease, so w r / (1 - r) bounds the rest
        if (r < 1 && w * r / (1 - r) < tail_accounting_floor)
        {
            break;
        }
    }
    return dropped;
}

}  // namespace

FinitePmf hypergeom_pmf(HypergeomParams const& params, double tail_cut)
{
    params.validate();
    std::int64_t const lo = params.lo();
    std::int64_t const hi = params.hi();
    std::int64_t const mode = params.mode();
    if (lo == hi)
    {
        return FinitePmf::point_mass(lo);
    }

    std::vector<double> up;
    std::vector<double> down;
    double const dropped_up = walk_side(
        mode, hi, +1, [&](std::int64_t j) { return hyper_ratio_up(params, j); },
        tail_cut, up);
    double const dropped_down = walk_side(
        mode, lo, -1, [&](std::int64_t j) { return hyper_ratio_down(params, j); },
        tail_cut, down);

    std::vector<double> weights;
    weights.reserve(down.size() + 1 + up.size());
    weights.insert(weights.end(), down.rbegin(), down.rend());
    weights.push_back(1.0);
    weights.insert(weights.end(), up.begin(), up.end());

    double const kept = kernels::sum(weights);
    double const total = kept + dropped_up + dropped_down;
    for (double& w : weights)
    {
        w /= total;
    }
    return FinitePmf(mode - static_cast<std::int64_t>(down.size()),
                     std::move(weights), (dropped_up + dropped_down) / total);
}

//---------------------------------------------------------------------------//
// Discrete normal
//---------------------------------------------------------------------------//
namespace
{
void validate(DiscreteNormalParams const& params)
{
    require(std::isfinite(params.scale) && params.scale > 0,
            "discrete normal scale must be positive");
    require(std::isfinite(params.center), "discrete normal center must be finite");
    require(params.lo <= params.hi, "discrete normal support must be nonempty");
}

// Support point closest to the center
std::int64_t dn_peak(DiscreteNormalParams const& params)
{
    double const c = std::clamp(params.center, static_cast<double>(params.lo),
                                static_cast<double>(params.hi));
    return static_cast<std::int64_t>(std::llround(c));
}

// exp(-(z_j^2 - z_peak^2) / 2) for every support point
std::vector<double> dn_relative_weights(DiscreteNormalParams const& params,
                                        double* log_peak)
{
    std::int64_t const peak = dn_peak(params);
    double const zp = (static_cast<double>(peak) - params.center) / params.scale;
    *log_peak = -0.5 * zp * zp;
    std::vector<double> rel(to_index(params.hi - params.lo + 1));
    for (std::int64_t j = params.lo; j <= params.hi; ++j)
    {
        double const z = (static_cast<double>(j) - params.center) / params.scale;
        rel[to_index(j - params.lo)] = std::exp(-0.5 * z * z - *log_peak);
    }
    return rel;
}

}  // namespace

double discrete_normal_normalizer(DiscreteNormalParams const& params)
{
    validate(params);
    double log_peak = 0;
    auto const rel = dn_relative_weights(params, &log_peak);
    return std::exp(log_peak) * kernels::sum(rel)
           / (params.scale * std::sqrt(2 * std::numbers::pi));
}

FinitePmf discrete_normal_pmf(DiscreteNormalParams const& params, double tail_cut)
{
    validate(params);
    double log_peak = 0;
    auto rel = dn_relative_weights(params, &log_peak);
    double const total = kernels::sum(rel);

    // Keep the contiguous range around the peak where rel >= tail_cut
    std::size_t const peak = to_index(dn_peak(params) - params.lo);
    std::size_t first = peak;
    while (first > 0 && rel[first - 1] >= tail_cut)
    {
        --first;
    }
    std::size_t last = peak;
    while (last + 1 < rel.size() && rel[last + 1] >= tail_cut)
    {
        ++last;
    }
    double dropped = 0;
    for (std::size_t i = 0; i < first; ++i)
    {
        dropped += rel[i];
    }
    for (std::size_t i = last + 1; i < rel.size(); ++i)
    {
        dropped += rel[i];
    }
    std::vector<double> weights(rel.begin() + static_cast<std::ptrdiff_t>(first),
                                rel.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    for (double& w : weights)
    {
        w /= total;
    }
    return FinitePmf(params.lo + static_cast<std::int64_t>(first), std::move(weights),
                     dropped / total);
}

//---------------------------------------------------------------------------//
// TV distance and convolution
//---------------------------------------------------------------------------//
double tv_distance(FinitePmf const& p, FinitePmf const& q)
{
    auto const pw = p.weights();
    auto const qw = q.weights();
    std::int64_t const overlap_lo = std::max(p.lo(), q.lo());
    std::int64_t const overlap_hi = std::min(p.hi(), q.hi());

    double acc = 0;
    if (overlap_lo > overlap_hi)
    {
        acc = p.total() + q.total();
    }
    else
    {
        auto const len = to_index(overlap_hi - overlap_lo + 1);
        auto const p_mid = pw.subspan(to_index(overlap_lo - p.lo()), len);
        auto const q_mid = qw.subspan(to_index(overlap_lo - q.lo()), len);
        acc = kernels::abs_diff_sum(p_mid, q_mid);
        // Parts outside the overlap belong to exactly one pmf
        acc += kernels::sum(pw.first(to_index(overlap_lo - p.lo())));
        acc += kernels::sum(qw.first(to_index(overlap_lo - q.lo())));
        acc += kernels::sum(pw.last(to_index(p.hi() - overlap_hi)));
        acc += kernels::sum(qw.last(to_index(q.hi() - overlap_hi)));
    }
    return std::clamp(0.5 * acc, 0.0, 1.0);
}

FinitePmf difference_law(FinitePmf const& pa, FinitePmf const& pb)
{
    auto const aw = pa.weights();
    auto const bw = pb.weights();
    std::vector<double> result(aw.size() + bw.size() - 1, 0.0);
    // Value a - b lands at index i + (|B| - 1 - j) for a = lo_A + i, b = lo_B + j
    for (std::size_t j = 0; j < bw.size(); ++j)
    {
        std::span<double> dst(result.data() + (bw.size() - 1 - j), aw.size());
        kernels::axpy(bw[j], aw, dst);
    }
    double const lost = pa.lost_mass() + pb.lost_mass()
                        - pa.lost_mass() * pb.lost_mass();
    return FinitePmf(pa.lo() - pb.hi(), std::move(result), lost);
}

//---------------------------------------------------------------------------//
// Tail bound
//---------------------------------------------------------------------------//
double hoeffding_tail(HypergeomParams const& params, double deviation)
{
    return 2 * std::exp(-2 * static_cast<double>(params.draws) * deviation * deviation);
}

double hoeffding_window_deviation(HypergeomParams const& params, double delta)
{
    double const p = static_cast<double>(params.successes)
                     / static_cast<double>(params.population);
    double const f = static_cast<double>(params.draws)
                     / static_cast<double>(params.population);
    return delta * p * (1 - p) * (1 - f);
}

//---------------------------------------------------------------------------//
// Sampling
//---------------------------------------------------------------------------//
std::int64_t sample(FinitePmf const& pmf, RngStream& rng)
{
    auto const w = pmf.weights();
    if (w.size() == 1)
    {
        return pmf.lo();
    }
    auto const mode = to_index(std::max_element(w.begin(), w.end()) - w.begin());
    double u = rng.uniform() * pmf.total();

    u -= w[mode];
    if (u < 0)
    {
        return pmf.lo() + static_cast<std::int64_t>(mode);
    }
    // Visit the remaining points in order of the larger frontier weight
    std::ptrdiff_t left = static_cast<std::ptrdiff_t>(mode) - 1;
    std::size_t right = mode + 1;
    while (left >= 0 || right < w.size())
    {
        bool const take_left
            = left >= 0 && (right >= w.size() || w[to_index(left)] >= w[right]);
        std::size_t const idx = take_left ? to_index(left) : right;
        u -= w[idx];
        if (u < 0)
        {
            return pmf.lo() + static_cast<std::int64_t>(idx);
        }
        if (take_left)
        {
            --left;
        }
        else
        {
            ++right;
        }
    }
    // Only reachable through rounding in the cumulative sum
    return pmf.lo() + static_cast<std::int64_t>(mode);
}

std::int64_t sample_hypergeom(HypergeomParams const& params, RngStream& rng)
{
    std::int64_t const lo = params.lo();
    std::int64_t const hi = params.hi();
    if (lo == hi)
    {
        return lo;
    }
    std::int64_t const mode = params.mode();
    double const log_mode
        = log_choose(params.successes, mode)
          + log_choose(params.population - params.successes, params.draws - mode)
          - log_choose(params.population, params.draws);

    double u = rng.uniform();
    double const w_mode = std::exp(log_mode);
    u -= w_mode;
    if (u < 0)
    {
        return mode;
    }

    std::int64_t left = mode - 1;
    std::int64_t right = mode + 1;
    double w_left = left >= lo ? w_mode * hyper_ratio_down(params, mode) : 0;
    double w_right = right <= hi ? w_mode * hyper_ratio_up(params, mode) : 0;
    while (left >= lo || right <= hi)
    {
        bool const take_left = left >= lo && (right > hi || w_left >= w_right);
        if (take_left)
        {
            u -= w_left;
            if (u < 0)
            {
                return left;
            }
            w_left = left > lo ? w_left * hyper_ratio_down(params, left) : 0;
            --left;
        }
        else
        {
            u -= w_right;
            if (u < 0)
            {
                return right;
            }
            w_right = right < hi ? w_right * hyper_ratio_up(params, right) : 0;
            ++right;
        }
        if (w_left == 0 && w_right == 0)
        {
            break;
        }
    }
    return mode;
}

}  // namespace blmix
