//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/oracles.hpp
//! Brute-force enumerations used as independent references in tests.
//---------------------------------------------------------------------------//
#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace oracle
{
//! All bitmasks over `n` labels with exactly `k` bits set
inline std::vector<std::uint32_t> subsets(int n, int k)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
    {
        if (std::popcount(m) == k)
        {
            out.push_back(m);
        }
    }
    return out;
}

inline std::uint32_t low_bits(int count)
{
    return count <= 0 ? 0u : (count >= 32 ? ~0u : ((1u << count) - 1));
}

//! P(H = j) for j = 0..draws by counting subsets of a labeled population
inline std::vector<double> hypergeom(int population, int successes, int draws)
{
    std::vector<double> counts(static_cast<std::size_t>(draws + 1), 0.0);
    auto const all = subsets(population, draws);
    std::uint32_t const red = low_bits(successes);
    for (auto m : all)
    {
        counts[static_cast<std::size_t>(std::popcount(m & red))] += 1;
    }
    for (double& c : counts)
    {
        c /= static_cast<double>(all.size());
    }
    return counts;
}

//! One-step law from x by enumerating every pair of k-subsets of both urns
inline std::vector<double> transition_row(int n, int k, int x)
{
    std::vector<double> row(static_cast<std::size_t>(n + 1), 0.0);
    auto const sel = subsets(n, k);
    // Left urn: labels 0..n-1, reds first. Right urn: same, n - x reds first.
    std::uint32_t const red_left = low_bits(x);
    std::uint32_t const red_right = low_bits(n - x);
    double const w = 1.0 / (static_cast<double>(sel.size()) * static_cast<double>(sel.size()));
    for (auto a : sel)
    {
        int const out = std::popcount(a & red_left);
        for (auto b : sel)
        {
            int const in = std::popcount(b & red_right);
            row[static_cast<std::size_t>(x - out + in)] += w;
        }
    }
    return row;
}

/*!
 * Joint law of the labeled-ball coupling by enumeration.
 *
 * Both chains use the same left selection A and right selection B. Reds
 * occupy the first x labels of the left urn and the first n - x labels of
 * the right urn for a chain at state x.
 */
struct CouplingOutcome
{
    int x{0};
    int y{0};
};

inline std::vector<CouplingOutcome> coupling_outcomes(int n, int k, int x, int y)
{
    std::vector<CouplingOutcome> out;
    auto const sel = subsets(n, k);
    for (auto a : sel)
    {
        for (auto b : sel)
        {
            int const nx = x - std::popcount(a & low_bits(x)) + std::popcount(b & low_bits(n - x));
            int const ny = y - std::popcount(a & low_bits(y)) + std::popcount(b & low_bits(n - y));
            out.push_back({nx, ny});
        }
    }
    return out;
}

inline std::map<std::pair<std::int64_t, std::int64_t>, double>
coupling_law(int n, int k, int x, int y)
{
    auto const outcomes = coupling_outcomes(n, k, x, y);
    std::map<std::pair<std::int64_t, std::int64_t>, double> law;
    for (auto const& o : outcomes)
    {
        law[{o.x, o.y}] += 1.0 / static_cast<double>(outcomes.size());
    }
    return law;
}

}  // namespace oracle
