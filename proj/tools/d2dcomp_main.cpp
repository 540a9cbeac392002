// Command-line harness: run experiment configs, validate them, list recipes.
//
// Exit codes: 0 success, 2 config error, 3 numeric error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "d2dcomp/errors.hpp"
#include "d2dcomp/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw d2dcomp::ConfigError("config", "cannot read '" + path + "'");
    std::ostringstream text;
    text << stream.rdbuf();
    return text.str();
}

int run_command(const std::string& config_path, const std::string& recipe,
                const std::optional<std::string>& out,
                const std::optional<std::uint64_t>& seed,
                const std::optional<std::uint64_t>& trials) {
    std::string text;
    if (!recipe.empty()) {
        if (!config_path.empty())
            throw d2dcomp::ConfigError("config", "give a config file or --recipe, not both");
        text = d2dcomp::recipe_config(recipe);
    } else if (!config_path.empty()) {
        text = read_file(config_path);
    } else {
        throw d2dcomp::ConfigError("config", "a config file or --recipe is required");
    }

    d2dcomp::ExperimentConfig config = d2dcomp::parse_config(text);
    if (seed) config.seed = *seed;
    if (trials) config.trials = *trials;
    if (out) config.output = *out;

    const std::vector<std::string> violations = d2dcomp::validate_config(config);
    if (!violations.empty()) {
        for (const std::string& v : violations) std::cerr << v << '\n';
        return kExitConfig;
    }

    const std::vector<d2dcomp::ResultRow> rows = d2dcomp::run_experiment(config);
    const std::string csv =
        d2dcomp::format_csv(rows, d2dcomp::sha256_hex(text), config.seed);
    d2dcomp::write_file_atomic(config.output, csv);
    std::cout << "wrote " << config.output << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

int validate_command(const std::string& config_path) {
    const std::string text = read_file(config_path);
    const d2dcomp::ExperimentConfig config = d2dcomp::parse_config(text);
    const std::vector<std::string> violations = d2dcomp::validate_config(config);
    if (violations.empty()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const std::string& v : violations) std::cerr << v << '\n';
    return kExitConfig;
}

int list_recipes_command() {
    for (const std::string& name : d2dcomp::recipe_names()) std::cout << name << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cache-assisted cooperative content delivery: simulation, "
                 "analysis, and cache optimization for clustered D2D networks"};
    app.require_subcommand(1);

    std::string run_config;
    std::string run_recipe;
    std::optional<std::string> run_out;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::uint64_t> run_trials;
    CLI::App* run = app.add_subcommand("run", "Execute a config and write CSV results");
    run->add_option("config", run_config, "Path to a JSON experiment config");
    run->add_option("--recipe", run_recipe, "Built-in config name (see list-recipes)");
    run->add_option("--out", run_out, "Output CSV path (overrides the config)");
    run->add_option("--seed", run_seed, "Master seed (overrides the config)");
    run->add_option("--trials", run_trials, "Monte Carlo trials (overrides the config)");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Check a config and report violations");
    validate->add_option("config", validate_path, "Path to a JSON experiment config")
        ->required();

    CLI::App* list = app.add_subcommand("list-recipes", "List built-in experiment configs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return run_command(run_config, run_recipe, run_out, run_seed, run_trials);
        if (validate->parsed()) return validate_command(validate_path);
        if (list->parsed()) return list_recipes_command();
    } catch (const d2dcomp::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const d2dcomp::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
