//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/distributions.hpp
//! Finite probability mass functions on contiguous integer ranges.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blmix/rng.hpp"

namespace blmix
{
//! Weights smaller than this fraction of the mode weight may be dropped
inline constexpr double default_tail_cut = 1e-17;

//---------------------------------------------------------------------------//
/*!
 * Probability mass function on {offset, ..., offset + size - 1}.
 *
 * Stored in canonical form: first and last weights are strictly positive.
 * Weights are absolute probabilities; if a construction dropped negligible
 * tail mass, the amount is kept in `lost_mass()` and the weights sum to
 * `1 - lost_mass()`. Call `renormalized()` to fold the lost mass back in.
 */
class FinitePmf
{
  public:
    // Point mass at zero
    FinitePmf();

    // Construct from absolute probabilities; leading/trailing zeros trimmed
    FinitePmf(std::int64_t offset, std::vector<double> weights, double lost_mass = 0);

    // Construct from nonnegative weights of any total
    static FinitePmf from_unnormalized(std::int64_t offset, std::vector<double> weights);

    static FinitePmf point_mass(std::int64_t at);

    //// ACCESSORS ////

    std::int64_t lo() const { return offset_; }
    std::int64_t hi() const
    {
        return offset_ + static_cast<std::int64_t>(weights_.size()) - 1;
    }
    std::size_t size() const { return weights_.size(); }
    std::span<double const> weights() const { return weights_; }
    double lost_mass() const { return lost_mass_; }
    bool truncated() const { return lost_mass_ > 0; }

    //! Probability of j (zero outside the stored support)
    double operator()(std::int64_t j) const
    {
        if (j < lo() || j > hi())
        {
            return 0;
        }
        return weights_[static_cast<std::size_t>(j - offset_)];
    }

    double total() const;
    double mean() const;
    double variance() const;
    //! Expectation of g over the stored support
    template<class F>
    double expect(F&& g) const
    {
        double result = 0;
        for (std::size_t i = 0; i < weights_.size(); ++i)
        {
            result += weights_[i] * g(offset_ + static_cast<std::int64_t>(i));
        }
        return result;
    }

    //// TRANSFORMS ////

    // Law of X + by
    FinitePmf shifted(std::int64_t by) const;
    // Same weights divided by their sum, lost mass cleared
    FinitePmf renormalized() const;

  private:
    std::int64_t offset_{0};
    std::vector<double> weights_;
    double lost_mass_{0};
};

//---------------------------------------------------------------------------//
/*!
 * Hypergeometric law: number of type-1 objects among `draws` objects taken
 * without replacement from `population` objects, `successes` of type 1.
 */
struct HypergeomParams
{
    std::int64_t population{1};
    std::int64_t successes{0};
    std::int64_t draws{0};

    // Throws DomainError unless 0 <= successes, draws <= population
    void validate() const;

    std::int64_t lo() const;
    std::int64_t hi() const;
    std::int64_t mode() const;
    double mean() const;
    double variance() const;
};

//! dN(center, scale, [lo, hi]): normal density sampled on integers
struct DiscreteNormalParams
{
    double center{0};
    double scale{1};
    std::int64_t lo{0};
    std::int64_t hi{0};
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

// log(n!) accurate to a few ulps
double log_factorial(std::int64_t n);

// log of the binomial coefficient C(n, k); -inf outside 0 <= k <= n
double log_choose(std::int64_t n, std::int64_t k);

// Hypergeometric pmf, evaluated from the mode outward by ratio recurrence
FinitePmf hypergeom_pmf(HypergeomParams const& params,
                        double tail_cut = default_tail_cut);

// Normalization constant: sum over the support of phi((j - x)/s)/s
double discrete_normal_normalizer(DiscreteNormalParams const& params);

// Discrete normal pmf
FinitePmf discrete_normal_pmf(DiscreteNormalParams const& params,
                              double tail_cut = default_tail_cut);

// Total variation distance over the union of supports
double tv_distance(FinitePmf const& p, FinitePmf const& q);

// Exact law of A - B for independent A ~ pa and B ~ pb
FinitePmf difference_law(FinitePmf const& pa, FinitePmf const& pb);

// Hoeffding bound 2 exp(-2 draws deviation^2) on P(|H - draws p| >= deviation draws)
double hoeffding_tail(HypergeomParams const& params, double deviation);

// Deviation delta p q (1 - f) used with the hypergeometric window
double hoeffding_window_deviation(HypergeomParams const& params, double delta);

// Draw from a pmf by inverse transform, visiting points from the mode outward
std::int64_t sample(FinitePmf const& pmf, RngStream& rng);

// Exact hypergeometric draw without materializing the pmf
std::int64_t sample_hypergeom(HypergeomParams const& params, RngStream& rng);

}  // namespace blmix
