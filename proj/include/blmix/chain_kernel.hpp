//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/chain_kernel.hpp
//! Exact transition kernel of the (n,k) Bernoulli-Laplace chain.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string_view>
#include <utility>
#include <vector>

#include "blmix/distributions.hpp"

namespace blmix
{
//---------------------------------------------------------------------------//
/*!
 * Two urns of n balls, n red and n white in total; each step swaps k
 * uniformly chosen balls between the urns. The state is the number of red
 * balls in the left urn, in {0, ..., n}.
 */
struct ChainParams
{
    std::int64_t n{1};
    std::int64_t k{0};

    void validate() const;

    //! k/n lies in (0, delta) for the given delta in (0, 1/2)
    bool satisfies_c1(double delta) const;

    double swap_fraction() const
    {
        return static_cast<double>(k) / static_cast<double>(n);
    }
};

enum class StartPolicy
{
    all_states,  //!< maximize over every start state
    state_zero,  //!< start from 0 (equivalently n)
};

std::string_view to_string(StartPolicy policy);

//! d(t) for t = 0..t_max
struct MixingProfile
{
    ChainParams params;
    StartPolicy start_policy{StartPolicy::state_zero};
    std::vector<double> d_values;
    double lost_mass{0};
};

//! Exact value (lhs) against closed form (rhs)
struct MomentReport
{
    int t{0};
    double lhs{0};
    double rhs{0};
    double abs_err{0};
    double rel_err{0};

    static MomentReport compare(int t, double lhs, double rhs);
};

enum class Eigenfunction
{
    f1,
    f2,
    f3
};

//! Largest n for which a dense kernel or all-states profile is allowed
inline constexpr std::int64_t dense_kernel_limit = 4096;
//! Largest n for which profiles maximize over all start states by default
inline constexpr std::int64_t exact_max_start_limit = 512;

//---------------------------------------------------------------------------//
/*!
 * Lazily cached transition rows and the stationary law for one chain.
 *
 * Rows are exact (only underflowed weights dropped) for n up to
 * dense_kernel_limit and tail-truncated above it. Row lookups are safe to
 * call concurrently; each row is built once.
 */
class ChainKernel
{
  public:
    explicit ChainKernel(ChainParams params);

    ChainParams const& params() const { return params_; }
    double tail_cut() const { return tail_cut_; }

    // Law of X_1 given X_0 = x
    FinitePmf const& row(std::int64_t x) const;

    // Stationary (hypergeometric) law
    FinitePmf const& stationary() const { return stationary_; }

    // Dense (n+1) x (n+1) matrix; throws InfeasibleSize above the limit
    std::vector<std::vector<double>> materialize() const;

  private:
    ChainParams params_;
    double tail_cut_;
    FinitePmf stationary_;
    std::unique_ptr<std::once_flag[]> row_once_;
    mutable std::vector<std::unique_ptr<FinitePmf const>> rows_;
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

// One-step law from x as x + H1 - H0, H1 ~ Hyper(n, n-x, k), H0 ~ Hyper(n, x, k)
FinitePmf transition_row(ChainParams const& params, std::int64_t x,
                         double tail_cut = 0);

// pi(x) = C(n,x) C(n,n-x) / C(2n,n), evaluated in log space
FinitePmf stationary(ChainParams const& params, double tail_cut = 0);

// Apply the kernel `steps` times to mu
FinitePmf evolve(ChainKernel const& kernel, FinitePmf const& mu, int steps);

// d(t) for t = 0..t_max, maximized over the start set of the policy
MixingProfile distance_profile(ChainKernel const& kernel, int t_max,
                               StartPolicy policy, unsigned threads = 1);

// Smallest t with d(t) <= epsilon; throws HorizonExceeded
int t_mix(MixingProfile const& profile, double epsilon);

// Polynomial eigenfunctions f1, f2 and the contraction polynomial f3
double eigen_eval(ChainParams const& params, Eigenfunction kind, double x);
double eigen_eval(ChainParams const& params, Eigenfunction kind, std::int64_t x);

// Closed forms E_x0 f1(X_t) and E_x0 f1(X_t)^2
double expected_f1(ChainParams const& params, std::int64_t x0, int t);
double expected_f1_squared(ChainParams const& params, std::int64_t x0, int t);

// Exact evolution against the closed forms, for t = 0..t_max
std::vector<std::pair<MomentReport, MomentReport>>
moment_identity_series(ChainKernel const& kernel, std::int64_t x0, int t_max);

// Same as above at a single t: (first moment, second moment)
std::pair<MomentReport, MomentReport>
verify_moment_identities(ChainKernel const& kernel, std::int64_t x0, int t);

// Chebyshev disjoint-sets lower bound on ||P_t(0, .) - pi||_TV from exact moments
double lower_bound_certificate(ChainParams const& params, int t);

}  // namespace blmix
