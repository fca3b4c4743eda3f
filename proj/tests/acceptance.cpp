//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/acceptance.cpp
//! End-to-end acceptance checks; prints one PASS/FAIL line per criterion.
//---------------------------------------------------------------------------//
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "blmix/approximation.hpp"
#include "blmix/asymptotics.hpp"
#include "blmix/chain_kernel.hpp"
#include "blmix/coupling.hpp"
#include "oracles.hpp"

using namespace blmix;
namespace fs = std::filesystem;

namespace
{
struct Outcome
{
    bool pass{false};
    std::string detail;
};

std::string fmt(char const* format, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, a);
    return buf;
}

//---------------------------------------------------------------------------//
Outcome kernel_oracle()
{
    double worst = 0;
    int rows = 0;
    for (int n = 1; n <= 8; ++n)
    {
        for (int k = 0; k <= n; ++k)
        {
            for (int x = 0; x <= n; ++x)
            {
                auto const ref = oracle::transition_row(n, k, x);
                auto const row = transition_row({n, k}, x);
                for (int y = 0; y <= n; ++y)
                {
                    worst = std::max(worst, std::fabs(row(y) - ref[static_cast<std::size_t>(y)]));
                }
                ++rows;
            }
        }
    }
    return {worst <= 1e-12, std::to_string(rows) + " rows, max |diff| = " + fmt("%.3g", worst)
                                + " (tol 1e-12)"};
}

Outcome stationarity()
{
    double worst_tv = 0;
    double worst_rel = 0;
    for (std::int64_t n : {10, 100, 1000, 2000})
    {
        ChainKernel const kernel({n, n / 4});
        auto const& pi = kernel.stationary();
        worst_tv = std::max(worst_tv, tv_distance(evolve(kernel, pi, 1), pi));
        for (std::int64_t x = 0; x <= n; ++x)
        {
            auto const& row = kernel.row(x);
            for (std::int64_t y = row.lo(); y <= row.hi(); ++y)
            {
                double const lhs = pi(x) * row(y);
                double const rhs = pi(y) * kernel.row(y)(x);
                // Entries below the normal range of doubles carry no relative precision
                if (lhs > 1e-280 || rhs > 1e-280)
                {
                    double const scale = std::max(lhs, rhs);
                    worst_rel = std::max(worst_rel, std::fabs(lhs - rhs) / scale);
                }
            }
        }
    }
    return {worst_tv <= 1e-10 && worst_rel <= 1e-10,
            "max TV(pi P, pi) = " + fmt("%.3g", worst_tv) + ", max detailed-balance rel err = "
                + fmt("%.3g", worst_rel) + " (tol 1e-10)"};
}

Outcome moment_identities()
{
    double worst_rel = 0;
    double worst_abs_small = 0;
    bool ok = true;
    for (std::int64_t n : {10, 100, 1000})
    {
        ChainKernel const kernel({n, n / 4});
        for (std::int64_t x0 : {std::int64_t{0}, n / 4, n / 2})
        {
            for (auto const& [m1, m2] : moment_identity_series(kernel, x0, 30))
            {
                for (auto const* r : {&m1, &m2})
                {
                    if (std::fabs(r->rhs) < 1e-6)
                    {
                        worst_abs_small = std::max(worst_abs_small, r->abs_err);
                        ok = ok && r->abs_err <= 1e-12;
                    }
                    else
                    {
                        worst_rel = std::max(worst_rel, r->rel_err);
                        ok = ok && r->rel_err <= 1e-9;
                    }
                }
            }
        }
    }
    return {ok, "max rel err = " + fmt("%.3g", worst_rel) + " (tol 1e-9), max abs err where "
                + "|rhs| < 1e-6 = " + fmt("%.3g", worst_abs_small) + " (tol 1e-12)"};
}

Outcome coupling_marginals()
{
    int const n = 5;
    int const k = 2;
    ChainParams const params{n, k};
    double worst_marginal = 0;
    double worst_joint = 0;
    bool contracts = true;
    std::size_t pairs = 0;
    for (int x = 0; x <= n; ++x)
    {
        for (int y = 0; y <= n; ++y)
        {
            auto const outcomes = oracle::coupling_outcomes(n, k, x, y);
            pairs = outcomes.size();
            std::vector<double> mx(n + 1, 0.0), my(n + 1, 0.0);
            for (auto const& o : outcomes)
            {
                mx[o.x] += 1.0 / static_cast<double>(outcomes.size());
                my[o.y] += 1.0 / static_cast<double>(outcomes.size());
                contracts = contracts && std::abs(o.x - o.y) <= std::abs(x - y);
            }
            auto const rx = transition_row(params, x);
            auto const ry = transition_row(params, y);
            for (int s = 0; s <= n; ++s)
            {
                worst_marginal = std::max({worst_marginal, std::fabs(mx[s] - rx(s)),
                                           std::fabs(my[s] - ry(s))});
            }
            auto const ref = oracle::coupling_law(n, k, x, y);
            auto const law = coupled_step_law(params, {x, y});
            for (auto const& [state, prob] : ref)
            {
                auto it = law.find(state);
                worst_joint = std::max(worst_joint,
                                       std::fabs(prob - (it == law.end() ? 0.0 : it->second)));
            }
            for (auto const& [state, prob] : law)
            {
                contracts = contracts
                            && std::llabs(state.first - state.second) <= std::abs(x - y);
                if (!ref.count(state))
                {
                    worst_joint = std::max(worst_joint, prob);
                }
            }
        }
    }
    bool const ok = worst_marginal <= 1e-15 && worst_joint <= 1e-15 && contracts;
    return {ok, std::to_string(pairs) + " (A,B) pairs per start; max marginal diff = "
                    + fmt("%.3g", worst_marginal) + ", max joint diff vs block sampler = "
                    + fmt("%.3g", worst_joint) + ", contraction "
                    + (contracts ? "holds" : "VIOLATED")};
}

Outcome survival_bound()
{
    ChainParams const params{200, 50};
    double const closeness = std::sqrt(200.0) / std::log(std::log(200.0));
    double const r2 = std::floor(closeness);
    double worst_excess = -1;
    for (double r : {1.0, r2})
    {
        auto const est = survival_vs_bound(params, 0, 200, r, 30, {100000, 20261016, 1});
        for (std::size_t i = 0; i < est.t_grid.size(); ++i)
        {
            double const excess = est.empirical_survival[i]
                                  - (est.theoretical_bound[i] + 3 * est.ci_halfwidth[i]);
            worst_excess = std::max(worst_excess, excess);
        }
    }
    return {worst_excess <= 0, "r in {1, " + fmt("%.0f", r2)
                                   + "}, max(survival - bound - 3 CI) = "
                                   + fmt("%.3g", worst_excess) + " (must be <= 0)"};
}

Outcome cutoff_bracket()
{
    double const lambda = 0.25;
    bool ok = true;
    std::ostringstream detail;
    double previous = 1e300;
    for (std::int64_t n : {250, 500, 1000, 2000})
    {
        auto const sched = make_schedule(n, n / 4, lambda);
        int const horizon = static_cast<int>(std::ceil(sched.t_n + 3 * sched.s_n + 10));
        ChainKernel const kernel(sched.chain());
        auto const prof = distance_profile(kernel, horizon, StartPolicy::state_zero);
        double const upper = sched.t_n + 3 * sched.s_n + 1;
        for (double eps : {0.25, 0.75})
        {
            int const tm = t_mix(prof, eps);
            double const lower = sched.t_n - lower_bound_constant(lambda, eps);
            ok = ok && tm >= lower && tm <= upper;
        }
        double const diag
            = static_cast<double>(t_mix(prof, 0.25) - t_mix(prof, 0.75)) / t_mix(prof, 0.5);
        ok = ok && diag <= previous;
        previous = diag;
        detail << "n=" << n << ": t_mix(.25)=" << t_mix(prof, 0.25)
               << " t_mix(.75)=" << t_mix(prof, 0.75) << " upper=" << fmt("%.1f", upper)
               << " diag=" << fmt("%.3f", diag) << "; ";
    }
    return {ok, detail.str() + "bracket and non-increasing diagnostic"};
}

Outcome lower_bound()
{
    auto const big = make_schedule(1000000, 250000, 0.25);
    int const t_big = static_cast<int>(std::floor(big.t_n)) - 8;
    double const cert_big = lower_bound_certificate(big.chain(), t_big);

    ChainParams const small{2000, 500};
    ChainKernel const kernel(small);
    auto const prof = distance_profile(kernel, 15, StartPolicy::state_zero);
    double worst = -1;
    for (int t = 0; t <= 15; ++t)
    {
        worst = std::max(worst, lower_bound_certificate(small, t) - prof.d_values[t]);
    }
    return {cert_big >= 0.9 && worst <= 0,
            "n=1e6, t=" + std::to_string(t_big) + ": certificate = " + fmt("%.6f", cert_big)
                + " (>= 0.9); n=2000: max(certificate - d(t)) = " + fmt("%.3g", worst)
                + " (<= 0)"};
}

Outcome hyper_rate()
{
    std::vector<double> xs, ys, scaled;
    std::ostringstream detail;
    for (std::int64_t n : {100, 1000, 10000, 100000})
    {
        double const tv = hyper_vs_dnormal_tv(n, n / 4, n / 2);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(tv));
        scaled.push_back(tv * std::sqrt(static_cast<double>(n)));
        detail << "TV(" << n << ")=" << fmt("%.3g", tv) << " ";
    }
    double const mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double const my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    double const slope = sxy / sxx;
    double const ratio = *std::max_element(scaled.begin(), scaled.end())
                         / *std::min_element(scaled.begin(), scaled.end());
    bool const ok = slope >= -0.75 && slope <= -0.40 && ratio < 3;
    return {ok, detail.str() + "; slope = " + fmt("%.3f", slope)
                    + " (need [-0.75, -0.40]), TV sqrt(n) max/min = " + fmt("%.3g", ratio)
                    + " (need < 3)"};
}

Outcome normalization()
{
    double worst = 0;
    for (std::int64_t n : {100, 1000, 10000, 100000})
    {
        auto const ap = ApproxParams::make(n, n / 4, n / 2);
        worst = std::max(worst, std::fabs(normalization_constant(ap) - 1)
                                    * std::sqrt(static_cast<double>(n)));
    }
    return {worst < 5, "max |N - 1| sqrt(n) = " + fmt("%.3g", worst) + " (need < 5)"};
}

Outcome one_step_closure()
{
    bool ok = true;
    double previous = 0;
    std::ostringstream detail;
    for (std::int64_t n : {1000, 10000, 100000})
    {
        auto const q = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), 0.25)));
        auto const dec = one_step_tv({n, n / 4}, n / 2, n / 2 + q);
        if (previous > 0)
        {
            ok = ok && dec.total_bound <= 0.9 * previous;
        }
        if (dec.exact_tv)
        {
            ok = ok && *dec.exact_tv <= dec.total_bound;
        }
        previous = dec.total_bound;
        detail << "n=" << n << ": bound=" << fmt("%.4f", dec.total_bound);
        if (dec.exact_tv)
        {
            detail << " exact=" << fmt("%.4f", *dec.exact_tv);
        }
        detail << "; ";
    }
    return {ok, detail.str() + "need >= 10% drop per decade and exact <= bound"};
}

int shell(std::string const& command)
{
    int const status = std::system((command + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(fs::path const& path)
{
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    auto const dir = fs::temp_directory_path() / "blmix-acceptance-determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    struct Case
    {
        char const* experiment;
        char const* config;
    };
    Case const cases[] = {
        {"coupling", R"({"n_grid":[200,1000],"lambda":0.25,"stopping":"tau_couple","r":2,
                         "replicas":5000,"master_seed":77,"horizon":25})"},
        {"profile", R"({"n_grid":[300,1500],"lambda":0.25,"horizon":20})"},
    };
    int compared = 0;
    for (auto const& c : cases)
    {
        auto const cfg = dir / (std::string(c.experiment) + ".json");
        std::ofstream(cfg) << c.config;
        for (int threads : {1, 3})
        {
            auto const out = dir / (std::string(c.experiment) + std::to_string(threads));
            int const rc = shell(std::string(BLMIX_CLI_PATH) + " " + c.experiment + " --config "
                                 + cfg.string() + " --output-dir " + out.string()
                                 + " --threads " + std::to_string(threads));
            if (rc != 0)
            {
                return {false, std::string(c.experiment) + " run exited with "
                                   + std::to_string(rc)};
            }
        }
        auto find_csv = [](fs::path const& d) {
            for (auto const& e : fs::directory_iterator(d))
            {
                if (e.path().extension() == ".csv")
                {
                    return e.path();
                }
            }
            return fs::path();
        };
        auto const a = find_csv(dir / (std::string(c.experiment) + "1"));
        auto const b = find_csv(dir / (std::string(c.experiment) + "3"));
        if (a.empty() || b.empty() || a.filename() != b.filename() || slurp(a) != slurp(b))
        {
            return {false, std::string(c.experiment) + " CSV differs between --threads 1 and 3"};
        }
        ++compared;
    }
    return {true, std::to_string(compared)
                      + " experiments byte-identical across --threads 1 and 3"};
}

}  // namespace

int main()
{
    struct Criterion
    {
        int id;
        char const* name;
        std::function<Outcome()> check;
    };
    std::vector<Criterion> const criteria{
        {1, "kernel oracle", kernel_oracle},
        {2, "stationarity and reversibility", stationarity},
        {3, "moment identities", moment_identities},
        {4, "coupling marginals", coupling_marginals},
        {5, "coupling survival bound", survival_bound},
        {6, "cutoff bracket", cutoff_bracket},
        {7, "lower-bound certificate", lower_bound},
        {8, "hypergeometric normal rate", hyper_rate},
        {9, "normalization constant", normalization},
        {10, "one-step closure", one_step_closure},
        {11, "determinism across threads", determinism},
    };

    int failures = 0;
    for (auto const& c : criteria)
    {
        auto const start = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = c.check();
        }
        catch (std::exception const& e)
        {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::chrono::duration<double> const dt = std::chrono::steady_clock::now() - start;
        failures += out.pass ? 0 : 1;
        std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", c.id,
                    c.name, out.detail.c_str(), dt.count());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
