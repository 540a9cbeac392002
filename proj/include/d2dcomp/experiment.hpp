#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2dcomp/caching.hpp"
#include "d2dcomp/geometry.hpp"
#include "d2dcomp/simulator.hpp"

namespace d2dcomp {

/// Parsed experiment description. Unit conversions (km^-2, dB, MB, MHz, dBm)
/// happen during parsing; everything here is linear SI.
struct ExperimentConfig {
    NetworkParams network;

    // Content model. Either an explicit popularity vector or a Zipf exponent.
    int n_files = 1;
    int cache_size = 1;
    std::optional<double> zipf_beta;
    std::vector<double> popularity; // empty unless given explicitly

    // Either a scalar per-file caching probability or named schemes.
    std::optional<double> c_m;
    std::vector<std::string> caching; // subset of {zipf,cpf,rc}

    std::vector<std::string> delivery;   // subset of {comp,ncp,rscp}
    std::vector<std::string> evaluators; // simulate, exact, bound, approx, ...

    std::string sweep_variable; // empty = single point
    std::vector<double> sweep_values;

    // Optional outer parameter grid, crossed with the sweep; keyed by the
    // same variable names (sweep units). Iterated in key order.
    std::map<std::string, std::vector<double>> grid;

    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string output = "results.csv";

    std::optional<EnergyParams> energy;
};

/// One output record. Text fields echo the run coordinates so each row is
/// self-describing; parameter columns reflect the swept value where relevant.
/// std_error and trials are empty for deterministic evaluators.
struct ResultRow {
    std::string evaluator;
    std::string delivery;
    std::string caching;
    std::string sweep_variable;
    double sweep_value = 0.0;
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<std::uint64_t> trials;
    double wall_time_ms = 0.0;
    NetworkParams network;
    int n_files = 0;
    int cache_size = 0;
    std::optional<double> zipf_beta;
    std::optional<double> c_m;
};

/// Parse the JSON text. Malformed JSON, unknown keys, or type errors throw
/// ConfigError with the offending dotted path in field().
ExperimentConfig parse_config(const std::string& json_text);

/// Semantic checks beyond parsing (ranges, cross-field consistency). Returns
/// one human-readable violation per problem, prefixed with the dotted field
/// path; empty means the config is runnable.
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Execute every (grid point x sweep value x evaluator x delivery x caching)
/// combination. Fully deterministic for a fixed config and seed: row seeds
/// derive from config.seed and the emission index.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// Serialize rows as CSV: a provenance comment line (config hash and master
/// seed), a header, then one row per record with %.17g numeric formatting.
std::string format_csv(const std::vector<ResultRow>& rows,
                       const std::string& config_sha, std::uint64_t seed);

/// Write text to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& text);

/// SHA-256 hex digest of the (unmodified) config text, for provenance.
std::string sha256_hex(const std::string& text);

/// Built-in experiment configurations, keyed by name.
std::vector<std::string> recipe_names();
std::string recipe_config(const std::string& name); // throws ConfigError if unknown

} // namespace d2dcomp
