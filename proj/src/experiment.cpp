#include "d2dcomp/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "d2dcomp/analytics.hpp"
#include "d2dcomp/errors.hpp"
#include "d2dcomp/optimizer.hpp"
#include "d2dcomp/rng.hpp"

namespace d2dcomp {

namespace {

using nlohmann::json;

const char* const kSweepVariables[] = {"beta",  "c_m", "h1", "lambda_p",
                                       "n_bar", "p",   "sigma", "theta"};

bool known_variable(const std::string& name) {
    for (const char* v : kSweepVariables)
        if (name == v) return true;
    return false;
}

bool contains(const std::vector<std::string>& values, const std::string& item) {
    return std::find(values.begin(), values.end(), item) != values.end();
}

// ---- typed JSON extraction; every error carries the dotted path ----

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

std::uint64_t get_uint(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<double>() < 0.0)
        throw ConfigError(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::string> get_strings(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_string(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError(prefix.empty() ? it.key() : prefix + "." + it.key(),
                              "unknown key");
    }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

DeliveryScheme scheme_from_name(const std::string& name) {
    if (name == "comp") return DeliveryScheme::comp;
    if (name == "ncp") return DeliveryScheme::ncp;
    return DeliveryScheme::rscp;
}

CachingVector caching_from_name(const std::string& name, const ContentParams& content) {
    if (name == "zipf") return scheme_zipf(content);
    if (name == "cpf") return scheme_cpf(content);
    return scheme_rc(content);
}

// Memoize a per-file rate-coverage functional over the distinct c values a
// caching vector contains, for the offloading curve.
std::function<double(double)> memoized(std::function<double(double)> fn) {
    auto cache = std::make_shared<std::map<double, double>>();
    return [cache, fn = std::move(fn)](double c) {
        auto it = cache->find(c);
        if (it == cache->end()) it = cache->emplace(c, fn(c)).first;
        return it->second;
    };
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    require_object(root, "config");
    check_keys(root, "",
               {"network", "content", "c_m", "caching", "delivery", "evaluators",
                "sweep", "grid", "trials", "seed", "output", "energy"});

    ExperimentConfig cfg;
    cfg.n_files = 0;
    cfg.cache_size = 0;

    if (root.contains("network")) {
        const json& net = require_object(root["network"], "network");
        check_keys(net, "network",
                   {"lambda_p_per_km2", "sigma_m", "n_bar", "p", "alpha", "gamma_d",
                    "theta_db"});
        if (net.contains("lambda_p_per_km2"))
            cfg.network.lambda_p =
                get_number(net["lambda_p_per_km2"], "network.lambda_p_per_km2") * 1e-6;
        if (net.contains("sigma_m"))
            cfg.network.sigma = get_number(net["sigma_m"], "network.sigma_m");
        if (net.contains("n_bar"))
            cfg.network.n_bar = get_number(net["n_bar"], "network.n_bar");
        if (net.contains("p")) cfg.network.p = get_number(net["p"], "network.p");
        if (net.contains("alpha"))
            cfg.network.alpha = get_number(net["alpha"], "network.alpha");
        if (net.contains("gamma_d"))
            cfg.network.gamma_d = get_number(net["gamma_d"], "network.gamma_d");
        if (net.contains("theta_db"))
            cfg.network.theta = db_to_linear(get_number(net["theta_db"], "network.theta_db"));
    }

    if (root.contains("content")) {
        const json& content = require_object(root["content"], "content");
        check_keys(content, "content", {"n_files", "cache_size", "zipf_beta", "q"});
        const bool has_beta = content.contains("zipf_beta");
        const bool has_q = content.contains("q");
        if (has_beta && has_q)
            throw ConfigError("content", "give zipf_beta or q, not both");
        if (!has_beta && !has_q)
            throw ConfigError("content", "either zipf_beta or q is required");
        if (!content.contains("cache_size"))
            throw ConfigError("content.cache_size", "required");
        cfg.cache_size = get_int(content["cache_size"], "content.cache_size");
        if (has_q) {
            cfg.popularity = get_numbers(content["q"], "content.q");
            cfg.n_files = static_cast<int>(cfg.popularity.size());
            if (content.contains("n_files") &&
                get_int(content["n_files"], "content.n_files") != cfg.n_files)
                throw ConfigError("content.n_files", "must match the length of q");
        } else {
            cfg.zipf_beta = get_number(content["zipf_beta"], "content.zipf_beta");
            if (!content.contains("n_files"))
                throw ConfigError("content.n_files", "required");
            cfg.n_files = get_int(content["n_files"], "content.n_files");
        }
    }

    if (root.contains("c_m")) cfg.c_m = get_number(root["c_m"], "c_m");
    if (root.contains("caching")) cfg.caching = get_strings(root["caching"], "caching");
    if (root.contains("delivery")) cfg.delivery = get_strings(root["delivery"], "delivery");
    if (root.contains("evaluators"))
        cfg.evaluators = get_strings(root["evaluators"], "evaluators");

    if (root.contains("sweep")) {
        const json& sweep = require_object(root["sweep"], "sweep");
        check_keys(sweep, "sweep", {"variable", "values"});
        if (sweep.contains("variable"))
            cfg.sweep_variable = get_string(sweep["variable"], "sweep.variable");
        if (sweep.contains("values"))
            cfg.sweep_values = get_numbers(sweep["values"], "sweep.values");
    }

    if (root.contains("grid")) {
        const json& grid = require_object(root["grid"], "grid");
        for (auto it = grid.begin(); it != grid.end(); ++it)
            cfg.grid[it.key()] = get_numbers(it.value(), "grid." + it.key());
    }

    if (root.contains("trials")) cfg.trials = get_uint(root["trials"], "trials");
    if (root.contains("seed")) cfg.seed = get_uint(root["seed"], "seed");
    if (root.contains("output")) cfg.output = get_string(root["output"], "output");

    if (root.contains("energy")) {
        const json& energy = require_object(root["energy"], "energy");
        check_keys(energy, "energy", {"P_d_dbm", "S_bar_mbytes", "W_mhz"});
        for (const char* key : {"P_d_dbm", "S_bar_mbytes", "W_mhz"})
            if (!energy.contains(key))
                throw ConfigError(std::string("energy.") + key, "required");
        EnergyParams ep;
        ep.p_d_watts =
            std::pow(10.0, (get_number(energy["P_d_dbm"], "energy.P_d_dbm") - 30.0) / 10.0);
        ep.s_bar_bits = get_number(energy["S_bar_mbytes"], "energy.S_bar_mbytes") * 8e6;
        ep.w_hz = get_number(energy["W_mhz"], "energy.W_mhz") * 1e6;
        cfg.energy = ep;
    }

    return cfg;
}

std::vector<std::string> validate_config(const ExperimentConfig& config) {
    std::vector<std::string> out;
    auto flag = [&](const std::string& field, const std::string& message) {
        out.push_back(field + ": " + message);
    };

    try {
        config.network.validate();
    } catch (const std::exception& e) {
        // Validator messages start with the member name; point the violation
        // at the config key (converted fields carry unit suffixes there).
        const std::string what = e.what();
        const std::size_t space = what.find(' ');
        std::string field = space == std::string::npos ? "" : what.substr(0, space);
        if (field == "lambda_p") field = "lambda_p_per_km2";
        else if (field == "sigma") field = "sigma_m";
        else if (field == "theta") field = "theta_db";
        if (field.empty())
            flag("network", what);
        else
            flag("network." + field, what.substr(space + 1));
    }

    const bool caching_mode = !config.caching.empty();
    const bool has_content = config.zipf_beta.has_value() || !config.popularity.empty();
    const bool sweeps_c_m = config.sweep_variable == "c_m";
    const bool has_c_m = config.c_m.has_value() || sweeps_c_m;

    if (config.evaluators.empty()) flag("evaluators", "at least one evaluator required");
    static const std::vector<std::string> known_evaluators = {
        "simulate",        "exact",
        "bound",           "approx",
        "one_provider",    "optimize_p1",
        "optimize_p2",     "optimize_p1_entropy",
        "optimize_p2_entropy", "energy",
        "nearest_cdf_exact",   "nearest_cdf_jensen",
        "nearest_cdf_empirical"};
    for (const std::string& ev : config.evaluators)
        if (!contains(known_evaluators, ev)) flag("evaluators", "unknown evaluator '" + ev + "'");
    for (const std::string& d : config.delivery)
        if (d != "comp" && d != "ncp" && d != "rscp")
            flag("delivery", "unknown delivery scheme '" + d + "'");
    for (const std::string& c : config.caching)
        if (c != "zipf" && c != "cpf" && c != "rc")
            flag("caching", "unknown caching scheme '" + c + "'");

    if (config.c_m.has_value() && caching_mode)
        flag("c_m", "give a scalar c_m or caching schemes, not both");
    if (config.c_m.has_value() && !(*config.c_m >= 0.0 && *config.c_m <= 1.0))
        flag("c_m", "must lie in [0, 1]");

    if (has_content) {
        if (config.n_files < 1) flag("content.n_files", "must be at least 1");
        if (config.cache_size < 1 || config.cache_size > config.n_files)
            flag("content.cache_size", "must lie in [1, n_files]");
        if (config.zipf_beta && !(*config.zipf_beta >= 0.0))
            flag("content.zipf_beta", "must be nonnegative");
        if (!config.popularity.empty()) {
            double total = 0.0;
            bool positive = true, sorted = true;
            for (std::size_t m = 0; m < config.popularity.size(); ++m) {
                if (!(config.popularity[m] > 0.0)) positive = false;
                if (m > 0 && config.popularity[m] > config.popularity[m - 1])
                    sorted = false;
                total += config.popularity[m];
            }
            if (!positive) flag("content.q", "entries must be positive");
            if (!sorted) flag("content.q", "entries must be non-increasing");
            if (std::abs(total - 1.0) > 1e-9) flag("content.q", "must sum to 1");
        }
    }

    const bool sweep_named = !config.sweep_variable.empty();
    if (!sweep_named && !config.sweep_values.empty())
        flag("sweep.variable", "required when sweep.values is given");
    if (sweep_named) {
        if (!known_variable(config.sweep_variable))
            flag("sweep.variable", "unknown variable '" + config.sweep_variable + "'");
        if (config.sweep_values.empty()) flag("sweep.values", "must be nonempty");
        for (double v : config.sweep_values)
            if (!std::isfinite(v)) flag("sweep.values", "entries must be finite");
        if (config.sweep_variable == "h1")
            for (double v : config.sweep_values)
                if (!(v > 0.0)) flag("sweep.values", "h1 values must be positive");
        if (config.sweep_variable == "beta" && !config.zipf_beta)
            flag("sweep.variable", "a beta sweep requires zipf content");
        if (sweeps_c_m && caching_mode)
            flag("sweep.variable", "a c_m sweep conflicts with caching schemes");
    }
    for (const auto& axis : config.grid) {
        const std::string path = "grid." + axis.first;
        if (!known_variable(axis.first)) flag(path, "unknown variable");
        else if (axis.first == "h1") flag(path, "h1 cannot be a grid axis");
        if (axis.first == config.sweep_variable) flag(path, "duplicates the sweep variable");
        if (axis.second.empty()) flag(path, "must be nonempty");
        for (double v : axis.second)
            if (!std::isfinite(v)) flag(path, "entries must be finite");
        if (axis.first == "beta" && !config.zipf_beta)
            flag(path, "a beta axis requires zipf content");
        if (axis.first == "c_m" && caching_mode)
            flag(path, "a c_m axis conflicts with caching schemes");
    }

    const bool h1_sweep = config.sweep_variable == "h1";
    for (const std::string& ev : config.evaluators) {
        const bool nearest = ev.rfind("nearest_", 0) == 0;
        if (nearest) {
            if (!h1_sweep)
                flag("sweep.variable", "evaluator '" + ev + "' requires an h1 sweep");
            if (!config.c_m.has_value()) flag("c_m", "required for evaluator '" + ev + "'");
            continue;
        }
        if (h1_sweep) {
            flag("evaluators", "'" + ev + "' cannot run on an h1 sweep");
            continue;
        }
        if (ev.rfind("optimize_", 0) == 0) {
            if (!has_content) flag("content", "required for evaluator '" + ev + "'");
            continue;
        }
        if (ev == "energy") {
            if (!config.energy) flag("energy", "required for the energy evaluator");
            if (!has_c_m) flag("c_m", "required for the energy evaluator");
            if (!contains(config.delivery, "comp"))
                flag("delivery", "the energy evaluator requires comp");
            continue;
        }
        // Per-file coverage / offloading evaluators.
        if (!has_c_m && !caching_mode)
            flag("c_m", "a scalar c_m or caching schemes required for evaluator '" + ev + "'");
        if (caching_mode) {
            if (!has_content) flag("content", "required with caching schemes");
            if (!contains(config.delivery, "comp"))
                flag("delivery", "offloading evaluators require comp");
        } else {
            std::vector<std::string> supported;
            if (ev == "simulate") supported = {"comp", "ncp", "rscp"};
            else if (ev == "approx") supported = {"comp", "ncp"};
            else supported = {"comp"};
            bool any = false;
            for (const std::string& d : config.delivery)
                if (contains(supported, d)) any = true;
            if (!any)
                flag("delivery", "no supported scheme for evaluator '" + ev + "'");
        }
    }

    if (config.trials < 1) flag("trials", "must be at least 1");
    if (config.output.empty()) flag("output", "must be nonempty");
    if (config.energy) {
        try {
            config.energy->validate();
        } catch (const std::exception& e) {
            flag("energy", e.what());
        }
    }
    return out;
}

namespace {

struct PointState {
    NetworkParams network;
    std::optional<double> zipf_beta;
    std::optional<double> c_m;
    double h1 = 0.0;
};

void apply_variable(PointState& point, const std::string& name, double value) {
    if (name == "sigma") point.network.sigma = value;
    else if (name == "lambda_p") point.network.lambda_p = value * 1e-6;
    else if (name == "theta") point.network.theta = db_to_linear(value);
    else if (name == "n_bar") point.network.n_bar = value;
    else if (name == "p") point.network.p = value;
    else if (name == "beta") point.zipf_beta = value;
    else if (name == "c_m") point.c_m = value;
    else if (name == "h1") point.h1 = value;
}

using TableKey = std::array<double, 5>;

TableKey table_key(const NetworkParams& net) {
    return {net.lambda_p, net.sigma, net.n_bar, net.p, net.alpha};
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    {
        const std::vector<std::string> violations = validate_config(config);
        if (!violations.empty()) {
            const std::string& first = violations.front();
            const std::size_t colon = first.find(':');
            throw ConfigError(first.substr(0, colon),
                              first.substr(std::min(first.size(), colon + 2)));
        }
    }

    std::vector<ResultRow> rows;
    std::map<TableKey, std::shared_ptr<const LaplaceTable>> tables;
    const bool caching_mode = !config.caching.empty();

    const std::vector<std::pair<std::string, std::vector<double>>> axes(
        config.grid.begin(), config.grid.end());
    std::vector<std::size_t> odo(axes.size(), 0);
    auto advance = [&]() {
        for (std::size_t d = axes.size(); d-- > 0;) {
            if (++odo[d] < axes[d].second.size()) return true;
            odo[d] = 0;
        }
        return false;
    };

    const std::size_t sweep_count =
        config.sweep_variable.empty() ? 1 : config.sweep_values.size();

    do {
        for (std::size_t s = 0; s < sweep_count; ++s) {
            PointState point;
            point.network = config.network;
            point.zipf_beta = config.zipf_beta;
            point.c_m = config.c_m;

            std::string label;
            for (std::size_t d = 0; d < axes.size(); ++d) {
                const double value = axes[d].second[odo[d]];
                apply_variable(point, axes[d].first, value);
                if (!label.empty()) label += ", ";
                label += axes[d].first + "=" + format_double(value);
            }
            double sweep_value = 0.0;
            if (!config.sweep_variable.empty()) {
                sweep_value = config.sweep_values[s];
                apply_variable(point, config.sweep_variable, sweep_value);
                if (!label.empty()) label += ", ";
                label += config.sweep_variable + "=" + format_double(sweep_value);
            }
            if (label.empty()) label = "single point";

            ContentParams content;
            bool have_content = false;
            if (point.zipf_beta) {
                content = ContentParams::zipf(config.n_files, config.cache_size,
                                              *point.zipf_beta);
                have_content = true;
            } else if (!config.popularity.empty()) {
                content.n_files = config.n_files;
                content.cache_size = config.cache_size;
                content.popularity = config.popularity;
                have_content = true;
            }

            auto ensure_table = [&]() -> const LaplaceTable* {
                auto it = tables.find(table_key(point.network));
                if (it == tables.end())
                    it = tables
                             .emplace(table_key(point.network),
                                      std::make_shared<const LaplaceTable>(point.network))
                             .first;
                return it->second.get();
            };

            auto emit = [&](const std::string& evaluator, const std::string& delivery,
                            const std::string& caching, double value,
                            std::optional<double> std_error,
                            std::optional<std::uint64_t> trials, double wall_ms,
                            bool with_c_m) {
                ResultRow row;
                row.evaluator = evaluator;
                row.delivery = delivery;
                row.caching = caching;
                row.sweep_variable = config.sweep_variable;
                row.sweep_value = sweep_value;
                row.value = value;
                row.std_error = std_error;
                row.trials = trials;
                row.wall_time_ms = wall_ms;
                row.network = point.network;
                row.n_files = have_content ? content.n_files : 0;
                row.cache_size = have_content ? content.cache_size : 0;
                row.zipf_beta = point.zipf_beta;
                row.c_m = with_c_m ? point.c_m : std::nullopt;
                rows.push_back(std::move(row));
            };

            using Clock = std::chrono::steady_clock;
            auto elapsed_ms = [](Clock::time_point t0) {
                return std::chrono::duration<double, std::milli>(Clock::now() - t0)
                    .count();
            };

            try {
                for (const std::string& ev : config.evaluators) {
                    SimulationOptions options;
                    options.trials = config.trials;
                    options.seed = sub_seed(config.seed, rows.size());

                    if (ev == "simulate" && !caching_mode) {
                        const auto t0 = Clock::now();
                        const auto all =
                            estimate_rate_coverage_all(point.network, *point.c_m, options);
                        const double ms = elapsed_ms(t0);
                        for (const std::string& d : config.delivery) {
                            const Estimate& est =
                                all[static_cast<int>(scheme_from_name(d))];
                            emit(ev, d, "", est.mean, est.std_error, est.trials, ms,
                                 true);
                        }
                    } else if (ev == "simulate") {
                        for (const std::string& scheme : config.caching) {
                            options.seed = sub_seed(config.seed, rows.size());
                            const auto t0 = Clock::now();
                            const Estimate est = estimate_offloading_gain(
                                point.network, content,
                                caching_from_name(scheme, content), options);
                            emit(ev, "comp", scheme, est.mean, est.std_error,
                                 est.trials, elapsed_ms(t0), false);
                        }
                    } else if (ev == "exact" || ev == "bound" || ev == "approx" ||
                               ev == "one_provider") {
                        std::function<double(double)> upsilon_comp;
                        const NetworkParams& net = point.network;
                        if (ev == "exact") {
                            const LaplaceTable* table = ensure_table();
                            upsilon_comp = [&net, table](double c) {
                                return rate_coverage_exact(c, net, 0, 100000, 20240901,
                                                           table);
                            };
                        } else if (ev == "bound") {
                            upsilon_comp = [&net](double c) {
                                return rate_coverage_bound(c, net);
                            };
                        } else if (ev == "approx") {
                            const LaplaceTable* table = ensure_table();
                            upsilon_comp = [&net, table](double c) {
                                return rate_coverage_approx(
                                    c, net, NearestPdfVariant::jensen, table);
                            };
                        } else {
                            upsilon_comp = [&net](double c) {
                                return rate_coverage_one_provider(c, net);
                            };
                        }

                        if (caching_mode) {
                            const auto fn = memoized(upsilon_comp);
                            for (const std::string& scheme : config.caching) {
                                const auto t0 = Clock::now();
                                const double value = offloading_gain_curve(
                                    caching_from_name(scheme, content),
                                    content.popularity, fn);
                                emit(ev, "comp", scheme, value, std::nullopt,
                                     std::nullopt, elapsed_ms(t0), false);
                            }
                        } else {
                            for (const std::string& d : config.delivery) {
                                const bool comp_like = d == "comp";
                                const bool ncp_ok = ev == "approx" && d == "ncp";
                                if (!comp_like && !ncp_ok) continue;
                                const auto t0 = Clock::now();
                                const double value =
                                    ncp_ok ? rate_coverage_ncp(*point.c_m, net,
                                                               NearestPdfVariant::jensen,
                                                               ensure_table())
                                           : upsilon_comp(*point.c_m);
                                emit(ev, d, "", value, std::nullopt, std::nullopt,
                                     elapsed_ms(t0), true);
                            }
                        }
                    } else if (ev == "nearest_cdf_exact" || ev == "nearest_cdf_jensen") {
                        const auto t0 = Clock::now();
                        const double value =
                            ev == "nearest_cdf_exact"
                                ? nearest_cdf(point.h1, *point.c_m, point.network)
                                : nearest_cdf_jensen(point.h1, *point.c_m, point.network);
                        emit(ev, "", "", value, std::nullopt, std::nullopt,
                             elapsed_ms(t0), true);
                    } else if (ev == "nearest_cdf_empirical") {
                        const auto t0 = Clock::now();
                        std::uint64_t hits = 0;
                        for (std::uint64_t t = 0; t < options.trials; ++t) {
                            Rng rng = make_rng(options.seed, t);
                            const TypicalCluster cluster =
                                sample_typical_cluster(point.network, *point.c_m, rng);
                            for (double dist : cluster.provider_distances)
                                if (dist <= point.h1) {
                                    ++hits;
                                    break;
                                }
                        }
                        const double mean =
                            static_cast<double>(hits) / static_cast<double>(options.trials);
                        const double se = std::sqrt(
                            std::max(0.0, mean * (1.0 - mean) /
                                              static_cast<double>(options.trials)));
                        emit(ev, "", "", mean, se, options.trials, elapsed_ms(t0), true);
                    } else if (ev.rfind("optimize_", 0) == 0) {
                        const bool p1 = ev.rfind("optimize_p1", 0) == 0;
                        const bool entropy = ev.size() > 11; // *_entropy suffix
                        const auto t0 = Clock::now();
                        const OptimResult result =
                            p1 ? optimize_p1(point.network, content, {},
                                             sub_seed(config.seed, rows.size()))
                               : optimize_p2(point.network, content);
                        const double value =
                            entropy ? normalized_entropy(result.c_star) : result.objective;
                        emit(ev, "", p1 ? "p1" : "p2", value, std::nullopt, std::nullopt,
                             elapsed_ms(t0), false);
                    } else if (ev == "energy") {
                        const auto t0 = Clock::now();
                        const Estimate est = estimate_rate_coverage(
                            DeliveryScheme::comp, point.network, *point.c_m, options);
                        const double value =
                            energy_per_request(1.0, *point.c_m, point.network.n_bar,
                                               *config.energy, point.network.theta,
                                               est.mean);
                        const double se =
                            est.mean > 0.0 ? value * est.std_error / est.mean : 0.0;
                        emit(ev, "comp", "", value, se, est.trials, elapsed_ms(t0),
                             true);
                    }
                }
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " [" + label + "]");
            }
        }
    } while (advance());

    return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows,
                       const std::string& config_sha, std::uint64_t seed) {
    std::string out = "# config_sha=" + config_sha + " seed=" + std::to_string(seed) + "\n";
    out +=
        "evaluator,delivery,caching,sweep_variable,sweep_value,value,std_error,"
        "trials,wall_time_ms,lambda_p_per_km2,sigma_m,n_bar,p,alpha,gamma_d,"
        "theta_db,n_files,cache_size,zipf_beta,c_m\n";
    for (const ResultRow& row : rows) {
        out += row.evaluator + ',' + row.delivery + ',' + row.caching + ',';
        out += row.sweep_variable + ',';
        out += row.sweep_variable.empty() ? "" : format_double(row.sweep_value);
        out += ',';
        out += format_double(row.value);
        out += ',';
        if (row.std_error) out += format_double(*row.std_error);
        out += ',';
        if (row.trials) out += std::to_string(*row.trials);
        out += ',';
        out += format_double(row.wall_time_ms);
        out += ',';
        out += format_double(row.network.lambda_p * 1e6) + ',';
        out += format_double(row.network.sigma) + ',';
        out += format_double(row.network.n_bar) + ',';
        out += format_double(row.network.p) + ',';
        out += format_double(row.network.alpha) + ',';
        out += format_double(row.network.gamma_d) + ',';
        out += format_double(linear_to_db(row.network.theta)) + ',';
        out += row.n_files > 0 ? std::to_string(row.n_files) : "";
        out += ',';
        out += row.cache_size > 0 ? std::to_string(row.cache_size) : "";
        out += ',';
        if (row.zipf_beta) out += format_double(*row.zipf_beta);
        out += ',';
        if (row.c_m) out += format_double(*row.c_m);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw ConfigError("output", "cannot open '" + tmp + "' for writing");
        stream << text;
        stream.flush();
        if (!stream.good()) throw ConfigError("output", "write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("output", "cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::string sha256_hex(const std::string& text) {
    static const std::uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
        0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
        0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
        0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
        0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
        0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
        0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
        0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                          0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

    std::vector<std::uint8_t> data(text.begin(), text.end());
    const std::uint64_t bit_length = static_cast<std::uint64_t>(data.size()) * 8u;
    data.push_back(0x80);
    while (data.size() % 64 != 56) data.push_back(0x00);
    for (int shift = 56; shift >= 0; shift -= 8)
        data.push_back(static_cast<std::uint8_t>(bit_length >> shift));

    auto rotr = [](std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); };
    for (std::size_t block = 0; block < data.size(); block += 64) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (static_cast<std::uint32_t>(data[block + 4 * i]) << 24) |
                   (static_cast<std::uint32_t>(data[block + 4 * i + 1]) << 16) |
                   (static_cast<std::uint32_t>(data[block + 4 * i + 2]) << 8) |
                   static_cast<std::uint32_t>(data[block + 4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 =
                rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 =
                rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
        std::uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const std::uint32_t ch = (e & f) ^ (~e & g);
            const std::uint32_t temp1 = hh + s1 + ch + k[i] + w[i];
            const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const std::uint32_t temp2 = s0 + maj;
            hh = g;
            g = f;
            f = e;
            e = d + temp1;
            d = c;
            c = b;
            b = a;
            a = temp1 + temp2;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
        h[5] += f;
        h[6] += g;
        h[7] += hh;
    }

    std::string hex;
    hex.reserve(64);
    for (std::uint32_t word : h) {
        char buffer[9];
        std::snprintf(buffer, sizeof(buffer), "%08x", word);
        hex += buffer;
    }
    return hex;
}

namespace {

const std::pair<const char*, const char*> kRecipes[] = {
    {"fig2", R"({
  "network": {"sigma_m": 10, "n_bar": 20, "p": 0.5, "theta_db": 0},
  "c_m": 0.5,
  "delivery": ["comp"],
  "evaluators": ["simulate", "bound"],
  "sweep": {"variable": "sigma", "values": [10, 20, 30, 40, 50, 60, 70, 80, 90, 100]},
  "grid": {"lambda_p": [10, 20, 50]},
  "trials": 20000,
  "seed": 20240901,
  "output": "fig2.csv"
})"},
    {"fig3", R"({
  "network": {"sigma_m": 10, "n_bar": 20, "p": 1.0, "theta_db": 0},
  "c_m": 0.5,
  "delivery": [],
  "evaluators": ["nearest_cdf_empirical", "nearest_cdf_exact", "nearest_cdf_jensen"],
  "sweep": {"variable": "h1", "values": [2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32, 34, 36, 38, 40]},
  "trials": 100000,
  "seed": 20240901,
  "output": "fig3.csv"
})"},
    {"fig4", R"({
  "network": {"lambda_p_per_km2": 30, "sigma_m": 30, "n_bar": 6, "p": 0.5, "theta_db": 0},
  "content": {"n_files": 12, "cache_size": 2, "zipf_beta": 0.2},
  "caching": ["zipf"],
  "delivery": ["comp"],
  "evaluators": ["simulate", "bound", "approx"],
  "sweep": {"variable": "beta", "values": [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0]},
  "trials": 20000,
  "seed": 20240901,
  "output": "fig4.csv"
})"},
    {"fig5", R"({
  "network": {"sigma_m": 10, "n_bar": 20, "p": 0.5, "theta_db": 0},
  "c_m": 0.5,
  "delivery": ["comp"],
  "evaluators": ["simulate", "approx"],
  "sweep": {"variable": "sigma", "values": [10, 20, 30, 40, 50]},
  "grid": {"lambda_p": [10, 30]},
  "trials": 20000,
  "seed": 20240901,
  "output": "fig5.csv"
})"},
    {"fig6", R"({
  "network": {"lambda_p_per_km2": 30, "sigma_m": 30, "n_bar": 6, "p": 0.5, "theta_db": 0},
  "content": {"n_files": 40, "cache_size": 8, "zipf_beta": 0.2},
  "caching": ["zipf", "cpf", "rc"],
  "delivery": ["comp"],
  "evaluators": ["optimize_p1", "optimize_p2", "simulate"],
  "sweep": {"variable": "beta", "values": [0.2, 0.6, 1.0]},
  "trials": 20000,
  "seed": 20240901,
  "output": "fig6.csv"
})"},
    {"fig7", R"({
  "network": {"lambda_p_per_km2": 10, "sigma_m": 10, "n_bar": 6, "p": 0.5, "theta_db": 0},
  "content": {"n_files": 12, "cache_size": 2, "zipf_beta": 0.4},
  "delivery": [],
  "evaluators": ["optimize_p2_entropy"],
  "sweep": {"variable": "sigma", "values": [10, 30, 50]},
  "grid": {"lambda_p": [10, 30, 40]},
  "trials": 1000,
  "seed": 20240901,
  "output": "fig7.csv"
})"},
    {"fig8", R"({
  "network": {"lambda_p_per_km2": 30, "sigma_m": 30, "p": 0.5, "theta_db": 0},
  "c_m": 0.5,
  "delivery": ["comp"],
  "evaluators": ["energy"],
  "energy": {"P_d_dbm": 20, "S_bar_mbytes": 5, "W_mhz": 5},
  "sweep": {"variable": "n_bar", "values": [2, 4, 6, 8, 10]},
  "trials": 50000,
  "seed": 20240901,
  "output": "fig8.csv"
})"},
    {"fig9", R"({
  "network": {"sigma_m": 30, "n_bar": 20, "p": 0.5, "theta_db": 0},
  "c_m": 0.5,
  "delivery": ["comp", "ncp", "rscp"],
  "evaluators": ["simulate"],
  "sweep": {"variable": "theta", "values": [-10, -5, 0, 5, 10, 15]},
  "grid": {"lambda_p": [10, 30]},
  "trials": 20000,
  "seed": 20240901,
  "output": "fig9.csv"
})"},
};

} // namespace

std::vector<std::string> recipe_names() {
    std::vector<std::string> names;
    for (const auto& recipe : kRecipes) names.push_back(recipe.first);
    return names;
}

std::string recipe_config(const std::string& name) {
    for (const auto& recipe : kRecipes)
        if (name == recipe.first) return recipe.second;
    throw ConfigError("recipe", "unknown recipe '" + name + "'");
}

} // namespace d2dcomp
