//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file experiments/run.cpp
//---------------------------------------------------------------------------//
#include <chrono>
#include <cmath>
#include <fstream>

#include "blmix/approximation.hpp"
#include "blmix/asymptotics.hpp"
#include "blmix/coupling.hpp"
#include "blmix/errors.hpp"
#include "blmix/experiments.hpp"

namespace blmix
{
namespace
{
using nlohmann::ordered_json;

//! Largest n for a truncated-convolution profile from state 0
constexpr std::int64_t state_zero_limit = 100000;

StartPolicy resolve_policy(ExperimentConfig const& cfg, std::int64_t n)
{
    if (cfg.start_policy == "all_states")
    {
        return StartPolicy::all_states;
    }
    if (cfg.start_policy == "state_zero")
    {
        return StartPolicy::state_zero;
    }
    return n <= exact_max_start_limit ? StartPolicy::all_states : StartPolicy::state_zero;
}

bool uses_exact_profile(ExperimentKind kind)
{
    return kind == ExperimentKind::profile || kind == ExperimentKind::mixtime
           || kind == ExperimentKind::sweep;
}

int default_horizon(Schedule const& s)
{
    return static_cast<int>(std::ceil(s.t_n + 3 * s.s_n + 10));
}

std::int64_t quarter_root_floor(std::int64_t n)
{
    auto r = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), 0.25)));
    while ((r + 1) * (r + 1) * (r + 1) * (r + 1) <= n)
    {
        ++r;
    }
    while (r > 0 && r * r * r * r > n)
    {
        --r;
    }
    return r;
}

ordered_json t_mix_or_null(MixingProfile const& profile, double eps)
{
    try
    {
        return t_mix(profile, eps);
    }
    catch (HorizonExceeded const&)
    {
        return nullptr;
    }
}

//---------------------------------------------------------------------------//
ExperimentOutput run_profile(ExperimentConfig const& cfg)
{
    ExperimentOutput out{Table({"n", "k", "lambda", "t", "d_of_t", "start_policy",
                                "lost_mass"}),
                         ordered_json::array()};
    for (auto n : cfg.n_grid)
    {
        auto const k = cfg.k_for(n);
        auto const sched = make_schedule(n, k, cfg.lambda);
        int const horizon = cfg.horizon.value_or(default_horizon(sched));
        auto const policy = resolve_policy(cfg, n);
        ChainKernel kernel({n, k});
        auto const prof = distance_profile(kernel, horizon, policy, cfg.threads);
        for (std::size_t t = 0; t < prof.d_values.size(); ++t)
        {
            out.table.add_row({n, k, cfg.lambda, static_cast<std::int64_t>(t),
                               prof.d_values[t], std::string(to_string(policy)),
                               prof.lost_mass});
        }
        ordered_json entry{{"n", n}, {"k", k}};
        for (double eps : cfg.epsilons)
        {
            entry["t_mix"].push_back({{"epsilon", eps}, {"t_mix", t_mix_or_null(prof, eps)}});
        }
        out.summary.push_back(std::move(entry));
    }
    return out;
}

ExperimentOutput run_mixtime(ExperimentConfig const& cfg)
{
    ExperimentOutput out{
        Table({"n", "k", "lambda", "start_policy", "epsilon", "t_mix", "t_mix_complement",
               "t_mix_half", "cutoff_ratio", "cutoff_diagnostic", "t_n", "s_n",
               "lower_bracket", "upper_bracket", "in_bracket"}),
        ordered_json::array()};
    for (auto n : cfg.n_grid)
    {
        auto const k = cfg.k_for(n);
        auto const sched = make_schedule(n, k, cfg.lambda);
        int const horizon = cfg.horizon.value_or(default_horizon(sched));
        auto const policy = resolve_policy(cfg, n);
        ChainKernel kernel({n, k});
        auto const prof = distance_profile(kernel, horizon, policy, cfg.threads);
        int const half = t_mix(prof, 0.5);
        double const upper = sched.t_n + 3 * sched.s_n + 1;
        for (double eps : cfg.epsilons)
        {
            int const tm = t_mix(prof, eps);
            int const tc = t_mix(prof, 1 - eps);
            double const lower = sched.t_n - lower_bound_constant(cfg.lambda, eps);
            bool const inside = tm >= lower && tm <= upper;
            out.table.add_row({n, k, cfg.lambda, std::string(to_string(policy)), eps,
                               std::int64_t{tm}, std::int64_t{tc}, std::int64_t{half},
                               static_cast<double>(tm) / tc,
                               static_cast<double>(tm - tc) / half, sched.t_n, sched.s_n,
                               lower, upper, std::int64_t{inside ? 1 : 0}});
        }
        out.summary.push_back({{"n", n}, {"k", k}, {"horizon", horizon},
                               {"d_at_horizon", prof.d_values.back()}});
    }
    return out;
}

ExperimentOutput run_coupling(ExperimentConfig const& cfg)
{
    ExperimentOutput out{Table({"n", "k", "lambda", "stopping", "x0", "y0", "threshold", "t",
                                "survival", "ci_halfwidth", "bound"}),
                         ordered_json::array()};
    auto const kind = *stopping_kind_from_string(cfg.stopping);
    MonteCarlo mc{cfg.replicas, cfg.master_seed, cfg.threads};
    for (auto n : cfg.n_grid)
    {
        auto const k = cfg.k_for(n);
        ChainParams const params{n, k};
        auto const sched = make_schedule(n, k, cfg.lambda);
        auto const x0 = cfg.x0.value_or(0);
        auto const y0 = cfg.y0.value_or(n);

        SurvivalEstimate est;
        double threshold = 0;
        if (kind == StoppingKind::tau_couple)
        {
            threshold = cfg.r.value_or(1.0);
            int const horizon = cfg.horizon.value_or(default_horizon(sched));
            est = survival_vs_bound(params, x0, y0, threshold, horizon, mc);
        }
        else
        {
            StoppingSpec spec;
            spec.kind = kind;
            spec.schedule = sched;
            spec.kappa = kind == StoppingKind::tau1   ? cfg.kappa1
                         : kind == StoppingKind::tau3 ? cfg.kappa3
                                                      : cfg.kappa4;
            threshold = spec.band_halfwidth();
            est = stopping_tail(params, spec, x0, y0, cfg.horizon.value_or(-1), mc);
        }
        for (std::size_t i = 0; i < est.t_grid.size(); ++i)
        {
            out.table.add_row({n, k, cfg.lambda, cfg.stopping, x0, y0, threshold,
                               std::int64_t{est.t_grid[i]}, est.empirical_survival[i],
                               est.ci_halfwidth[i], est.theoretical_bound[i]});
        }
        out.summary.push_back({{"n", n}, {"replicas", cfg.replicas}});
    }
    return out;
}

ExperimentOutput run_approx(ExperimentConfig const& cfg)
{
    ExperimentOutput out{
        Table({"n", "k", "ell", "sigma", "normalizer", "normalizer_dev_sqrt_n", "tv_hyper_dn",
               "tv_sqrt_n", "x0", "y0", "hyper_dn_sum", "shift_term", "center_term",
               "total_bound", "exact_tv"}),
        ordered_json::array()};
    for (auto n : cfg.n_grid)
    {
        auto const k = cfg.k_for(n);
        auto const ell = n / 2;
        auto const ap = ApproxParams::make(n, k, ell);
        double const norm = normalization_constant(ap);
        double const tv = hyper_vs_dnormal_tv(n, k, ell);
        double const root_n = std::sqrt(static_cast<double>(n));

        auto const x0 = cfg.x0.value_or(n / 2);
        auto const y0 = cfg.y0.value_or(std::min(n, n / 2 + quarter_root_floor(n)));
        auto const dec = one_step_tv({n, k}, x0, y0);
        double hyper_sum = 0;
        for (double term : dec.hyper_dn_terms)
        {
            hyper_sum += term;
        }
        Cell exact = std::string();
        if (dec.exact_tv)
        {
            exact = *dec.exact_tv;
        }
        out.table.add_row({n, k, ell, ap.sigma, norm, std::fabs(norm - 1) * root_n, tv,
                           tv * root_n, x0, y0, hyper_sum, dec.shift_term, dec.center_term,
                           dec.total_bound, exact});
    }
    return out;
}

ExperimentOutput run_lowerbound(ExperimentConfig const& cfg)
{
    ExperimentOutput out{Table({"n", "k", "lambda", "t", "t_n", "certificate"}),
                         ordered_json::array()};
    for (auto n : cfg.n_grid)
    {
        auto const k = cfg.k_for(n);
        auto const sched = make_schedule(n, k, cfg.lambda);
        int const horizon = cfg.horizon.value_or(static_cast<int>(std::ceil(sched.t_n)));
        for (int t = 0; t <= horizon; ++t)
        {
            out.table.add_row({n, k, cfg.lambda, std::int64_t{t}, sched.t_n,
                               lower_bound_certificate({n, k}, t)});
        }
    }
    return out;
}

ExperimentOutput run_schedule(ExperimentConfig const& cfg)
{
    ExperimentOutput out{
        Table({"n", "k", "lambda", "delta_n", "t_n", "s_n", "p_lambda", "r_n"}),
        ordered_json::array()};
    for (auto n : cfg.n_grid)
    {
        auto const s = make_schedule(n, cfg.k_for(n), cfg.lambda);
        out.table.add_row(
            {s.n, s.k, s.lambda, s.delta_n, s.t_n, s.s_n, s.p_lambda, s.r_n});
    }
    return out;
}

void check_writable(std::filesystem::path const& dir, std::string const& digest)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
    {
        throw IoError("output directory '" + dir.string() + "' cannot be created");
    }
    auto const probe = dir / (".blmix-probe-" + digest);
    {
        std::ofstream f(probe);
        if (!f)
        {
            throw IoError("output directory '" + dir.string() + "' is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

void write_text(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f)
    {
        throw IoError("failed to write '" + path.string() + "'");
    }
}

}  // namespace

//---------------------------------------------------------------------------//
void preflight(ExperimentConfig const& cfg)
{
    for (auto n : cfg.n_grid)
    {
        auto const k = cfg.k_for(n);
        ChainParams{n, k}.validate();
        if (!uses_exact_profile(cfg.experiment))
        {
            continue;
        }
        auto const policy = resolve_policy(cfg, n);
        if (policy == StartPolicy::all_states && n > dense_kernel_limit)
        {
            throw InfeasibleSize("exact all-states profile refused for n = "
                                 + std::to_string(n) + " (limit "
                                 + std::to_string(dense_kernel_limit)
                                 + "); use start_policy state_zero, or the coupling "
                                   "experiment for a Monte Carlo estimate");
        }
        if (policy == StartPolicy::state_zero && n > state_zero_limit)
        {
            throw InfeasibleSize("exact profile from state 0 refused for n = "
                                 + std::to_string(n) + " (limit "
                                 + std::to_string(state_zero_limit)
                                 + "); use the coupling experiment for a Monte Carlo "
                                   "estimate or lowerbound for closed-form moments");
        }
    }
}

ExperimentOutput execute(ExperimentConfig const& cfg)
{
    preflight(cfg);
    ExperimentOutput out;
    switch (cfg.experiment)
    {
        case ExperimentKind::profile:
            out = run_profile(cfg);
            break;
        case ExperimentKind::mixtime:
        case ExperimentKind::sweep:
            out = run_mixtime(cfg);
            break;
        case ExperimentKind::coupling:
            out = run_coupling(cfg);
            break;
        case ExperimentKind::approx:
            out = run_approx(cfg);
            break;
        case ExperimentKind::lowerbound:
            out = run_lowerbound(cfg);
            break;
        case ExperimentKind::schedule:
            out = run_schedule(cfg);
            break;
    }
    out.table.append_column("config_digest", config_digest(cfg));
    return out;
}

RunResult run(ExperimentConfig const& cfg)
{
    preflight(cfg);
    RunResult result;
    result.digest = config_digest(cfg);
    std::filesystem::path const dir(cfg.output_dir);
    check_writable(dir, result.digest);

    auto const start = std::chrono::steady_clock::now();
    result.output = execute(cfg);
    std::chrono::duration<double> const elapsed = std::chrono::steady_clock::now() - start;

    auto const stem = std::string(to_string(cfg.experiment)) + "-" + result.digest.substr(0, 8);
    result.csv_path = dir / (stem + ".csv");
    result.json_path = dir / (stem + ".json");
    result.meta_path = dir / (stem + ".meta.json");
    write_text(result.csv_path, result.output.table.to_csv());
    write_text(result.json_path, result.output.table.to_json_text());

    ordered_json meta{
        {"artifact_version", artifact_version},
        {"experiment", to_string(cfg.experiment)},
        {"config_digest", result.digest},
        {"config", canonical_config(cfg)},
        {"rng", "philox4x32-10"},
        {"master_seed", cfg.master_seed},
        {"threads", cfg.threads},
        {"wall_clock_seconds", elapsed.count()},
        {"warnings", cfg.warnings},
        {"summary", result.output.summary},
    };
    write_text(result.meta_path, meta.dump(2) + "\n");
    return result;
}

}  // namespace blmix
