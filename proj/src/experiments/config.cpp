//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file experiments/config.cpp
//---------------------------------------------------------------------------//
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "blmix/coupling.hpp"
#include "blmix/experiments.hpp"

namespace blmix
{
namespace
{
using nlohmann::json;

constexpr std::string_view known_fields[] = {
    "experiment", "n",         "n_grid",  "lambda", "k_rule", "k",      "epsilons",
    "replicas",   "master_seed", "horizon", "output_dir", "threads", "start_policy",
    "stopping",   "r",         "x0",      "y0",     "kappa1", "kappa3", "kappa4",
};

[[noreturn]] void fail(std::string const& field, std::string const& why)
{
    throw ConfigError("config field '" + field + "': " + why);
}

template<class T>
T get_as(json const& doc, std::string const& field)
{
    try
    {
        return doc.at(field).get<T>();
    }
    catch (json::exception const&)
    {
        fail(field, "has the wrong type");
    }
}

std::int64_t get_int(json const& doc, std::string const& field)
{
    auto const& v = doc.at(field);
    if (!v.is_number_integer())
    {
        fail(field, "must be an integer");
    }
    return v.get<std::int64_t>();
}

std::vector<std::int64_t> get_int_list(json const& doc, std::string const& field)
{
    auto const& v = doc.at(field);
    if (v.is_number_integer())
    {
        return {v.get<std::int64_t>()};
    }
    if (!v.is_array())
    {
        fail(field, "must be an integer or an array of integers");
    }
    std::vector<std::int64_t> out;
    for (auto const& item : v)
    {
        if (!item.is_number_integer())
        {
            fail(field, "must contain integers only");
        }
        out.push_back(item.get<std::int64_t>());
    }
    return out;
}

double get_real(json const& doc, std::string const& field)
{
    auto const& v = doc.at(field);
    if (!v.is_number())
    {
        fail(field, "must be a number");
    }
    return v.get<double>();
}

}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(ExperimentKind kind)
{
    switch (kind)
    {
        case ExperimentKind::profile:
            return "profile";
        case ExperimentKind::mixtime:
            return "mixtime";
        case ExperimentKind::sweep:
            return "sweep";
        case ExperimentKind::coupling:
            return "coupling";
        case ExperimentKind::approx:
            return "approx";
        case ExperimentKind::lowerbound:
            return "lowerbound";
        case ExperimentKind::schedule:
            return "schedule";
    }
    return "unknown";
}

std::optional<ExperimentKind> experiment_from_string(std::string_view name)
{
    for (auto kind : {ExperimentKind::profile, ExperimentKind::mixtime, ExperimentKind::sweep,
                      ExperimentKind::coupling, ExperimentKind::approx,
                      ExperimentKind::lowerbound, ExperimentKind::schedule})
    {
        if (to_string(kind) == name)
        {
            return kind;
        }
    }
    return std::nullopt;
}

std::int64_t ExperimentConfig::k_for(std::int64_t n) const
{
    if (k_rule == KRule::floor_lambda_n)
    {
        return static_cast<std::int64_t>(std::floor(lambda * static_cast<double>(n)));
    }
    auto it = std::find(n_grid.begin(), n_grid.end(), n);
    if (it == n_grid.end())
    {
        throw ConfigError("no explicit k for n = " + std::to_string(n));
    }
    return k_values[static_cast<std::size_t>(it - n_grid.begin())];
}

//---------------------------------------------------------------------------//
ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> fallback)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
    {
        throw ConfigError("config must be a JSON object");
    }
    for (auto const& item : doc.items())
    {
        if (std::find(std::begin(known_fields), std::end(known_fields), item.key())
            == std::end(known_fields))
        {
            throw ConfigError("unknown config field '" + item.key() + "'");
        }
    }

    ExperimentConfig cfg;

    // Experiment kind
    std::optional<ExperimentKind> kind = fallback;
    if (doc.contains("experiment"))
    {
        auto const name = get_as<std::string>(doc, "experiment");
        auto parsed = experiment_from_string(name);
        if (!parsed)
        {
            fail("experiment", "unknown experiment '" + name + "'");
        }
        if (fallback && *fallback != *parsed)
        {
            fail("experiment", "'" + name + "' conflicts with the command line experiment '"
                                   + std::string(to_string(*fallback)) + "'");
        }
        kind = parsed;
    }
    if (!kind)
    {
        fail("experiment", "is required");
    }
    cfg.experiment = *kind;

    // Sizes
    if (doc.contains("n") == doc.contains("n_grid"))
    {
        fail("n", "exactly one of 'n' and 'n_grid' is required");
    }
    auto const n_field = doc.contains("n") ? "n" : "n_grid";
    auto raw_grid = get_int_list(doc, n_field);
    if (raw_grid.empty())
    {
        fail(n_field, "must not be empty");
    }
    std::set<std::int64_t> seen;
    std::vector<std::size_t> kept_index;
    for (std::size_t i = 0; i < raw_grid.size(); ++i)
    {
        auto n = raw_grid[i];
        if (n < 3)
        {
            fail(n_field, "every n must be at least 3 (got " + std::to_string(n) + ")");
        }
        if (!seen.insert(n).second)
        {
            cfg.warnings.push_back("duplicate n = " + std::to_string(n)
                                   + " in n_grid removed");
            continue;
        }
        cfg.n_grid.push_back(n);
        kept_index.push_back(i);
    }

    // Swap fraction
    if (!doc.contains("lambda"))
    {
        fail("lambda", "is required");
    }
    cfg.lambda = get_real(doc, "lambda");
    if (!(cfg.lambda > 0 && cfg.lambda < 0.5))
    {
        fail("lambda", "must lie in the open interval (0, 1/2)");
    }

    if (doc.contains("k_rule"))
    {
        auto const rule = get_as<std::string>(doc, "k_rule");
        if (rule == "floor_lambda_n")
        {
            cfg.k_rule = KRule::floor_lambda_n;
        }
        else if (rule == "explicit")
        {
            cfg.k_rule = KRule::explicit_k;
        }
        else
        {
            fail("k_rule", "must be 'floor_lambda_n' or 'explicit'");
        }
    }
    if (cfg.k_rule == KRule::explicit_k)
    {
        if (!doc.contains("k"))
        {
            fail("k", "is required when k_rule is 'explicit'");
        }
        auto ks = get_int_list(doc, "k");
        if (ks.size() != raw_grid.size())
        {
            fail("k", "must list one value per entry of " + std::string(n_field));
        }
        for (auto i : kept_index)
        {
            cfg.k_values.push_back(ks[i]);
        }
    }
    else if (doc.contains("k"))
    {
        fail("k", "is only allowed when k_rule is 'explicit'");
    }
    for (auto n : cfg.n_grid)
    {
        auto k = cfg.k_for(n);
        if (k < 1 || k >= n)
        {
            fail("k", "must satisfy 1 <= k < n (got k = " + std::to_string(k)
                          + " for n = " + std::to_string(n) + ")");
        }
    }

    // Thresholds and Monte Carlo
    if (doc.contains("epsilons"))
    {
        auto const& v = doc.at("epsilons");
        if (!v.is_array() || v.empty())
        {
            fail("epsilons", "must be a non-empty array");
        }
        cfg.epsilons.clear();
        for (auto const& e : v)
        {
            if (!e.is_number())
            {
                fail("epsilons", "must contain numbers only");
            }
            double const eps = e.get<double>();
            if (!(eps > 0 && eps < 1))
            {
                fail("epsilons", "every epsilon must lie in (0, 1)");
            }
            cfg.epsilons.push_back(eps);
        }
    }
    if (doc.contains("replicas"))
    {
        cfg.replicas = get_int(doc, "replicas");
        if (cfg.replicas < 1)
        {
            fail("replicas", "must be at least 1");
        }
    }
    if (doc.contains("master_seed"))
    {
        auto const& v = doc.at("master_seed");
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned()))
        {
            fail("master_seed", "must be a nonnegative 64-bit integer");
        }
        cfg.master_seed = v.get<std::uint64_t>();
    }
    if (doc.contains("horizon"))
    {
        auto h = get_int(doc, "horizon");
        if (h < 0 || h > 1000000)
        {
            fail("horizon", "must lie in [0, 1000000]");
        }
        cfg.horizon = static_cast<int>(h);
    }
    if (doc.contains("output_dir"))
    {
        cfg.output_dir = get_as<std::string>(doc, "output_dir");
        if (cfg.output_dir.empty())
        {
            fail("output_dir", "must not be empty");
        }
    }
    if (doc.contains("threads"))
    {
        auto t = get_int(doc, "threads");
        if (t < 1 || t > 1024)
        {
            fail("threads", "must lie in [1, 1024]");
        }
        cfg.threads = static_cast<unsigned>(t);
    }
    if (doc.contains("start_policy"))
    {
        cfg.start_policy = get_as<std::string>(doc, "start_policy");
        if (cfg.start_policy != "auto" && cfg.start_policy != "all_states"
            && cfg.start_policy != "state_zero")
        {
            fail("start_policy", "must be 'auto', 'all_states' or 'state_zero'");
        }
    }
    if (doc.contains("stopping"))
    {
        cfg.stopping = get_as<std::string>(doc, "stopping");
        if (!stopping_kind_from_string(cfg.stopping))
        {
            fail("stopping", "must be one of tau_couple, tau1, tau3, tau4");
        }
    }
    if (doc.contains("r"))
    {
        cfg.r = get_real(doc, "r");
        if (!(*cfg.r > 0))
        {
            fail("r", "must be positive");
        }
    }
    for (auto const* field : {"x0", "y0"})
    {
        if (!doc.contains(field))
        {
            continue;
        }
        auto v = get_int(doc, field);
        for (auto n : cfg.n_grid)
        {
            if (v < 0 || v > n)
            {
                fail(field, "must lie in [0, n] for every n");
            }
        }
        (std::string_view(field) == "x0" ? cfg.x0 : cfg.y0) = v;
    }
    for (auto [field, slot] : {std::pair{"kappa1", &cfg.kappa1},
                               std::pair{"kappa3", &cfg.kappa3},
                               std::pair{"kappa4", &cfg.kappa4}})
    {
        if (doc.contains(field))
        {
            *slot = get_real(doc, field);
            if (!(*slot > 0))
            {
                fail(field, "must be positive");
            }
        }
    }
    return cfg;
}

//---------------------------------------------------------------------------//
nlohmann::json canonical_config(ExperimentConfig const& cfg)
{
    json doc;
    doc["artifact_version"] = artifact_version;
    doc["experiment"] = to_string(cfg.experiment);
    doc["n_grid"] = cfg.n_grid;
    doc["lambda"] = cfg.lambda;
    doc["k_rule"] = cfg.k_rule == KRule::explicit_k ? "explicit" : "floor_lambda_n";
    doc["k_values"] = cfg.k_values;
    doc["epsilons"] = cfg.epsilons;
    doc["replicas"] = cfg.replicas;
    doc["master_seed"] = cfg.master_seed;
    doc["horizon"] = cfg.horizon ? json(*cfg.horizon) : json(nullptr);
    doc["start_policy"] = cfg.start_policy;
    doc["stopping"] = cfg.stopping;
    doc["r"] = cfg.r ? json(*cfg.r) : json(nullptr);
    doc["x0"] = cfg.x0 ? json(*cfg.x0) : json(nullptr);
    doc["y0"] = cfg.y0 ? json(*cfg.y0) : json(nullptr);
    doc["kappa1"] = cfg.kappa1;
    doc["kappa3"] = cfg.kappa3;
    doc["kappa4"] = cfg.kappa4;
    return doc;
}

std::string config_digest(ExperimentConfig const& cfg)
{
    std::string const text = canonical_config(cfg).dump();
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text)
    {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace blmix
