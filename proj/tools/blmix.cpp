//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tools/blmix.cpp
//! Command-line front end: blmix <experiment> --config FILE [options]
//---------------------------------------------------------------------------//
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "blmix/errors.hpp"
#include "blmix/experiments.hpp"

namespace
{
enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_infeasible = 3,
    exit_io = 4,
};

std::string read_file(std::string const& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
    {
        throw blmix::ConfigError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::uint64_t parse_seed(std::string_view text, std::string_view source)
{
    std::uint64_t value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    {
        throw blmix::ConfigError(std::string(source) + " must be a nonnegative 64-bit integer");
    }
    return value;
}

bool ends_with(std::string const& s, std::string_view suffix)
{
    return s.size() >= suffix.size()
           && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

blmix::Table load_table(std::string const& path)
{
    auto const text = read_file(path);
    if (ends_with(path, ".csv"))
    {
        return blmix::Table::from_csv(text);
    }
    if (ends_with(path, ".json"))
    {
        return blmix::Table::from_json(nlohmann::ordered_json::parse(text));
    }
    throw blmix::ConfigError("unrecognized table extension for '" + path + "'");
}

struct RunOptions
{
    std::string config_path;
    std::string output_dir;
    std::string seed;
    unsigned threads{0};
};

int run_experiment(blmix::ExperimentKind kind, RunOptions const& opts)
{
    auto cfg = blmix::parse_config(read_file(opts.config_path), kind);
    if (char const* env = std::getenv("BLMIX_SEED"); env && *env)
    {
        cfg.master_seed = parse_seed(env, "BLMIX_SEED");
    }
    if (!opts.seed.empty())
    {
        cfg.master_seed = parse_seed(opts.seed, "--seed");
    }
    if (!opts.output_dir.empty())
    {
        cfg.output_dir = opts.output_dir;
    }
    if (opts.threads > 0)
    {
        cfg.threads = opts.threads;
    }
    for (auto const& w : cfg.warnings)
    {
        std::cerr << "warning: " << w << "\n";
    }

    auto const result = blmix::run(cfg);
    std::cout << result.csv_path.string() << "\n"
              << result.json_path.string() << "\n"
              << result.meta_path.string() << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bernoulli-Laplace urn chain experiments"};
    app.require_subcommand(1);

    RunOptions opts;
    std::optional<blmix::ExperimentKind> chosen;
    for (auto kind :
         {blmix::ExperimentKind::profile, blmix::ExperimentKind::mixtime,
          blmix::ExperimentKind::sweep, blmix::ExperimentKind::coupling,
          blmix::ExperimentKind::approx, blmix::ExperimentKind::lowerbound,
          blmix::ExperimentKind::schedule})
    {
        auto* sub = app.add_subcommand(std::string(blmix::to_string(kind)),
                                       "Run the " + std::string(blmix::to_string(kind))
                                           + " experiment");
        sub->add_option("--config", opts.config_path, "JSON config file")->required();
        sub->add_option("--output-dir", opts.output_dir, "Directory for result files");
        sub->add_option("--seed", opts.seed, "Master seed (overrides config and BLMIX_SEED)");
        sub->add_option("--threads", opts.threads, "Worker thread cap")
            ->check(CLI::Range(1u, 1024u));
        sub->callback([&chosen, kind] { chosen = kind; });
    }

    std::string convert_in;
    std::string convert_out;
    auto* convert = app.add_subcommand("convert", "Convert a result table between CSV and JSON");
    convert->add_option("input", convert_in, "Input .csv or .json")->required();
    convert->add_option("output", convert_out, "Output .csv or .json")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (chosen)
        {
            return run_experiment(*chosen, opts);
        }
        auto const table = load_table(convert_in);
        std::ofstream out(convert_out, std::ios::binary);
        if (!out)
        {
            throw blmix::IoError("cannot write '" + convert_out + "'");
        }
        if (ends_with(convert_out, ".csv"))
        {
            out << table.to_csv();
        }
        else if (ends_with(convert_out, ".json"))
        {
            out << table.to_json_text();
        }
        else
        {
            throw blmix::ConfigError("unrecognized table extension for '" + convert_out + "'");
        }
        return out ? exit_ok : exit_io;
    }
    catch (blmix::InfeasibleSize const& e)
    {
        std::cerr << "infeasible: " << e.what() << "\n";
        return exit_infeasible;
    }
    catch (blmix::IoError const& e)
    {
        std::cerr << "I/O error: " << e.what() << "\n";
        return exit_io;
    }
    catch (blmix::HorizonExceeded const& e)
    {
        std::cerr << "config error: " << e.what() << "; increase 'horizon'\n";
        return exit_config;
    }
    catch (std::invalid_argument const& e)
    {
        // ConfigError and DomainError
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (nlohmann::json::exception const& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_failure;
    }
}
