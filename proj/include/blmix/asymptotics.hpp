//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/asymptotics.hpp
//! Mixing-time schedule for k/n -> lambda and checks of its expansions.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "blmix/chain_kernel.hpp"

namespace blmix
{
//---------------------------------------------------------------------------//
/*!
 * Schedule quantities for one (n, k, lambda). All logarithms are natural.
 *
 * - t_n = log n / (2 |log(1 - 2 lambda)|): predicted mixing time
 * - s_n = log log n / lambda: cutoff window
 * - p_lambda = 2 log(1 - 2 lambda) / lambda
 * - r_n = sqrt(n) (log n)^{|p_lambda|/2}
 * - delta_n = k/n - lambda, delta_prime = h1(k) - h2(lambda) where
 *   f2(k) = 1 - 2 h1(k) and (1 - 2 lambda)^2 = 1 - 2 h2(lambda),
 *   delta_dprime = k(n-k)/n^2 - (lambda - lambda^2)
 */
struct Schedule
{
    std::int64_t n{0};
    std::int64_t k{0};
    double lambda{0};
    double delta_n{0};
    double t_n{0};
    double s_n{0};
    double p_lambda{0};
    double r_n{0};
    double delta_prime{0};
    double delta_dprime{0};

    ChainParams chain() const { return {n, k}; }
};

struct ExpansionReport
{
    int t{0};
    double exact{0};
    double leading{0};
    double corrected{0};
    double residual{0};
    //! t > t_n: outside the range where the expansion is claimed
    bool outside_hypothesis{false};
};

struct AssumptionRow
{
    std::int64_t n{0};
    std::int64_t k{0};
    bool c1_ok{false};
    double delta_n{0};
    double delta_log_n{0};
};

/*!
 * Finite-sample diagnostics for the rate condition Delta_n = o(1/log n).
 *
 * A finite sequence cannot establish an o(.) statement. `vanishing` only
 * reports whether the tail envelope sup_{m >= n} |Delta_m log m| has at
 * least halved from the first to the last grid point (or is identically
 * negligible).
 */
struct AssumptionReport
{
    std::vector<AssumptionRow> rows;
    std::vector<double> envelope;
    bool all_c1_ok{false};
    bool vanishing{false};
    std::string note;
};

struct F2AsymptoticRow
{
    std::int64_t n{0};
    double offset{0};
    double f2{0};
    //! f2 / (n^{-1} (log n)^q)
    double ratio{0};
};

struct F2AsymptoticReport
{
    std::vector<F2AsymptoticRow> rows;
    double max_abs_ratio{0};
    double min_abs_ratio{0};
    //! max/min of |ratio| over nonzero values
    double spread{0};
};

// Build the schedule; requires n >= 3 and lambda in (0, 1/2)
Schedule make_schedule(std::int64_t n, std::int64_t k, double lambda);

// Rate and (c1) diagnostics over an increasing sequence of n
AssumptionReport assumption1_report(std::vector<std::int64_t> const& ns,
                                    std::function<std::int64_t(std::int64_t)> const& k_of_n,
                                    double lambda, double delta);

// Exact eigenvalue power against its first-order expansion
ExpansionReport eigen_expansion(Schedule const& schedule, Eigenfunction which, int t);

// f2(n/2 + c sqrt(n) (log n)^{q/2}) scaled by n (log n)^{-q}, for each n and c
F2AsymptoticReport f2_asymptotic_check(std::vector<std::int64_t> const& ns, double q,
                                       std::vector<double> const& offset_multipliers);

// Lower-bound constant c(eps) = (log(sqrt 3 + 100) - log(eps)/2) / |log(1 - 2 lambda)|
double lower_bound_constant(double lambda, double epsilon);

}  // namespace blmix
