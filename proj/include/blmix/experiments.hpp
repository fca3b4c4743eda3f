//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/experiments.hpp
//! Config-driven experiments and their tabular output.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "blmix/chain_kernel.hpp"

namespace blmix
{
//! Malformed or out-of-domain configuration
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Output location cannot be written
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view artifact_version = "1.0.0";

enum class ExperimentKind
{
    profile,
    mixtime,
    sweep,
    coupling,
    approx,
    lowerbound,
    schedule,
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_string(std::string_view name);

enum class KRule
{
    floor_lambda_n,
    explicit_k,
};

//---------------------------------------------------------------------------//
/*!
 * Validated experiment configuration.
 *
 * JSON fields: experiment, n | n_grid, lambda, k_rule ("floor_lambda_n" or
 * "explicit"), k (one per n when explicit), epsilons, replicas, master_seed,
 * horizon, output_dir, threads, start_policy ("auto", "all_states",
 * "state_zero"), stopping, r, x0, y0, kappa1, kappa3, kappa4.
 */
struct ExperimentConfig
{
    ExperimentKind experiment{ExperimentKind::schedule};
    std::vector<std::int64_t> n_grid;
    double lambda{0};
    KRule k_rule{KRule::floor_lambda_n};
    std::vector<std::int64_t> k_values;
    std::vector<double> epsilons{0.25, 0.5, 0.75};
    std::int64_t replicas{10000};
    std::uint64_t master_seed{0};
    std::optional<int> horizon;
    std::string output_dir{"."};
    unsigned threads{1};
    std::string start_policy{"auto"};
    std::string stopping{"tau_couple"};
    std::optional<double> r;
    std::optional<std::int64_t> x0;
    std::optional<std::int64_t> y0;
    double kappa1{10};
    double kappa3{10};
    double kappa4{10};

    //! Non-fatal notes produced while parsing
    std::vector<std::string> warnings;

    std::int64_t k_for(std::int64_t n) const;
};

// Parse and validate; `fallback` names the experiment when the document omits it
ExperimentConfig parse_config(std::string_view text,
                              std::optional<ExperimentKind> fallback = std::nullopt);

// Canonical JSON of the fields that determine the payload
nlohmann::json canonical_config(ExperimentConfig const& cfg);

// FNV-1a 64 of the canonical config, as 16 hex digits
std::string config_digest(ExperimentConfig const& cfg);

//---------------------------------------------------------------------------//
// TABLES
//---------------------------------------------------------------------------//
using Cell = std::variant<std::int64_t, double, std::string>;

// 17 significant digits; integral doubles keep a ".0"
std::string format_cell(Cell const& cell);

// Inverse of format_cell for unquoted CSV fields
Cell infer_cell(std::string_view text);

//! Column-named rows of scalar cells
class Table
{
  public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    std::vector<std::string> const& columns() const { return columns_; }
    std::vector<std::vector<Cell>> const& rows() const { return rows_; }

    void add_row(std::vector<Cell> row);
    // Append a constant column to every row
    void append_column(std::string name, Cell const& value);

    std::string to_csv() const;
    std::string to_json_text() const;
    nlohmann::ordered_json to_json() const;

    static Table from_csv(std::string_view text);
    static Table from_json(nlohmann::ordered_json const& doc);

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

//---------------------------------------------------------------------------//
// RUNNING
//---------------------------------------------------------------------------//
struct ExperimentOutput
{
    Table table;
    //! Run-dependent summaries kept out of the payload
    nlohmann::ordered_json summary;
};

struct RunResult
{
    ExperimentOutput output;
    std::string digest;
    std::filesystem::path csv_path;
    std::filesystem::path json_path;
    std::filesystem::path meta_path;
};

// Throw InfeasibleSize or ConfigError before any work starts
void preflight(ExperimentConfig const& cfg);

// Compute the payload without touching the filesystem
ExperimentOutput execute(ExperimentConfig const& cfg);

// Preflight, execute, and write <experiment>-<digest8>.{csv,json,meta.json}
RunResult run(ExperimentConfig const& cfg);

}  // namespace blmix
