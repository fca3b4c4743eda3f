//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/coupling.hpp
//! Monte Carlo simulation of two chains driven by shared swap selections.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "blmix/asymptotics.hpp"
#include "blmix/chain_kernel.hpp"
#include "blmix/rng.hpp"

namespace blmix
{
//! Positions of the two coupled chains
struct CoupledState
{
    std::int64_t x{0};
    std::int64_t y{0};

    friend bool operator==(CoupledState const&, CoupledState const&) = default;
};

enum class StoppingKind
{
    tau_couple,  //!< |X - Y| <= r
    tau1,        //!< both within kappa sqrt(n) of n/2
    tau3,        //!< close, and both within kappa r_n of n/2
    tau4,        //!< close, and both within kappa sqrt(n) of n/2
};

std::string_view to_string(StoppingKind kind);
std::optional<StoppingKind> stopping_kind_from_string(std::string_view name);

inline constexpr double default_kappa = 10;

struct StoppingSpec
{
    StoppingKind kind{StoppingKind::tau_couple};
    //! distance threshold for tau_couple
    double r{1};
    double kappa{default_kappa};
    Schedule schedule;

    void validate() const;
    //! sqrt(n) / log log n, the closeness threshold of tau3 and tau4
    double closeness() const;
    //! Half-width of the band around n/2
    double band_halfwidth() const;
    //! Horizon used when none is given: t_n, s_n or 2 s_n (floored)
    int default_horizon() const;
};

//! P(tau > t) per t with a 95% binomial interval and a rigorous upper bound
struct SurvivalEstimate
{
    std::vector<int> t_grid;
    std::vector<double> empirical_survival;
    std::vector<double> ci_halfwidth;
    std::vector<double> theoretical_bound;
};

//! Replica count and parallelism for Monte Carlo estimators
struct MonteCarlo
{
    std::int64_t replicas{10000};
    std::uint64_t master_seed{0};
    unsigned threads{1};
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

// One step of a single chain
std::int64_t chain_step(ChainParams const& params, std::int64_t x, RngStream& rng);

// One step of the labeled-ball coupling, sampled through block counts
CoupledState coupled_step(ChainParams const& params, CoupledState s, RngStream& rng);

// Exact joint law of coupled_step from state s
std::map<std::pair<std::int64_t, std::int64_t>, double>
coupled_step_law(ChainParams const& params, CoupledState s);

// Normal-approximation half-width, floored at 1.96 / (2 replicas)
double binomial_ci_halfwidth(double p_hat, std::int64_t replicas);

// (1 - 2k(n-k)/n^2)^t |x0 - y0| / r, clamped to [0, 1]
double contraction_bound(ChainParams const& params, std::int64_t x0, std::int64_t y0,
                         double r, int t);

// Empirical survival of tau_couple(r) against contraction_bound, t = 0..t_max
SurvivalEstimate survival_vs_bound(ChainParams const& params, std::int64_t x0,
                                   std::int64_t y0, double r, int t_max,
                                   MonteCarlo const& mc);

// Survival of the given stopping time up to horizon (default per kind if < 0)
SurvivalEstimate stopping_tail(ChainParams const& params, StoppingSpec const& spec,
                               std::int64_t x0, std::int64_t y0, int horizon,
                               MonteCarlo const& mc);

// P(sup over t in [s, s + s_n] of |X_t - n/2| > r) from x0
double band_excursion(ChainParams const& params, Schedule const& schedule,
                      std::int64_t x0, double r, int s, MonteCarlo const& mc);

}  // namespace blmix
