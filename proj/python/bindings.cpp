#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "d2dcomp/analytics.hpp"
#include "d2dcomp/caching.hpp"
#include "d2dcomp/channel.hpp"
#include "d2dcomp/errors.hpp"
#include "d2dcomp/experiment.hpp"
#include "d2dcomp/geometry.hpp"
#include "d2dcomp/optimizer.hpp"
#include "d2dcomp/simulator.hpp"

namespace py = pybind11;
using namespace d2dcomp;

PYBIND11_MODULE(_d2dcomp, m) {
    m.doc() = "cache-assisted cooperative content delivery in clustered D2D networks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<NetworkParams>(m, "NetworkParams")
        .def(py::init<>())
        .def_readwrite("lambda_p", &NetworkParams::lambda_p)
        .def_readwrite("sigma", &NetworkParams::sigma)
        .def_readwrite("n_bar", &NetworkParams::n_bar)
        .def_readwrite("p", &NetworkParams::p)
        .def_readwrite("alpha", &NetworkParams::alpha)
        .def_readwrite("gamma_d", &NetworkParams::gamma_d)
        .def_readwrite("theta", &NetworkParams::theta)
        .def("validate", &NetworkParams::validate);

    py::class_<ContentParams>(m, "ContentParams")
        .def(py::init<>())
        .def_readwrite("n_files", &ContentParams::n_files)
        .def_readwrite("cache_size", &ContentParams::cache_size)
        .def_readwrite("popularity", &ContentParams::popularity)
        .def("validate", &ContentParams::validate)
        .def_static("zipf", &ContentParams::zipf, py::arg("n_files"),
                    py::arg("cache_size"), py::arg("beta"));

    py::class_<SimulationOptions>(m, "SimulationOptions")
        .def(py::init<>())
        .def_readwrite("trials", &SimulationOptions::trials)
        .def_readwrite("seed", &SimulationOptions::seed)
        .def_readwrite("threads", &SimulationOptions::threads)
        .def_readwrite("window_radius", &SimulationOptions::window_radius);

    py::class_<EnergyParams>(m, "EnergyParams")
        .def(py::init<>())
        .def_readwrite("p_d_watts", &EnergyParams::p_d_watts)
        .def_readwrite("s_bar_bits", &EnergyParams::s_bar_bits)
        .def_readwrite("w_hz", &EnergyParams::w_hz);

    py::class_<OptimizerSettings>(m, "OptimizerSettings")
        .def(py::init<>())
        .def_readwrite("bisection_tol", &OptimizerSettings::bisection_tol)
        .def_readwrite("max_iter", &OptimizerSettings::max_iter)
        .def_readwrite("multistart_count", &OptimizerSettings::multistart_count)
        .def_readwrite("fixed_point_tol", &OptimizerSettings::fixed_point_tol)
        .def_readwrite("iterate_surrogate", &OptimizerSettings::iterate_surrogate);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("mean", &Estimate::mean)
        .def_readonly("std_error", &Estimate::std_error)
        .def_readonly("trials", &Estimate::trials);

    py::class_<OptimResult>(m, "OptimResult")
        .def_readonly("c_star", &OptimResult::c_star)
        .def_readonly("objective", &OptimResult::objective)
        .def_readonly("v_star", &OptimResult::v_star)
        .def_readonly("iterations", &OptimResult::iterations)
        .def_readonly("converged", &OptimResult::converged)
        .def_readonly("budget_residual", &OptimResult::budget_residual)
        .def_readonly("stationarity_residual", &OptimResult::stationarity_residual);

    py::class_<KktReport>(m, "KktReport")
        .def_readonly("budget_residual", &KktReport::budget_residual)
        .def_readonly("max_stationarity_violation",
                      &KktReport::max_stationarity_violation);

    py::enum_<DeliveryScheme>(m, "DeliveryScheme")
        .value("comp", DeliveryScheme::comp)
        .value("ncp", DeliveryScheme::ncp)
        .value("rscp", DeliveryScheme::rscp);

    py::enum_<NearestPdfVariant>(m, "NearestPdfVariant")
        .value("exact", NearestPdfVariant::exact)
        .value("jensen", NearestPdfVariant::jensen);

    m.def("zipf_popularity", &zipf_popularity, py::arg("n_files"), py::arg("beta"));
    m.def("scheme_zipf", &scheme_zipf, py::arg("content"));
    m.def("scheme_cpf", &scheme_cpf, py::arg("content"));
    m.def("scheme_rc", &scheme_rc, py::arg("content"));

    m.def("z_factor", &z_factor, py::arg("params"));
    m.def(
        "rate_coverage_exact",
        [](double c_m, const NetworkParams& params, int k_max, std::uint64_t mc_samples,
           std::uint64_t seed) {
            return rate_coverage_exact(c_m, params, k_max, mc_samples, seed);
        },
        py::arg("c_m"), py::arg("params"), py::arg("k_max") = 0,
        py::arg("mc_samples") = 100000, py::arg("seed") = 20240901);
    m.def(
        "rate_coverage_bound",
        [](double c_m, const NetworkParams& params, int k_max, std::uint64_t mc_samples,
           std::uint64_t seed) {
            return rate_coverage_bound(c_m, params, k_max, mc_samples, seed);
        },
        py::arg("c_m"), py::arg("params"), py::arg("k_max") = 0,
        py::arg("mc_samples") = 100000, py::arg("seed") = 20240901);
    m.def(
        "rate_coverage_approx",
        [](double c_m, const NetworkParams& params, NearestPdfVariant variant) {
            return rate_coverage_approx(c_m, params, variant);
        },
        py::arg("c_m"), py::arg("params"),
        py::arg("variant") = NearestPdfVariant::jensen);
    m.def(
        "rate_coverage_ncp",
        [](double c_m, const NetworkParams& params, NearestPdfVariant variant) {
            return rate_coverage_ncp(c_m, params, variant);
        },
        py::arg("c_m"), py::arg("params"),
        py::arg("variant") = NearestPdfVariant::jensen);
    m.def("rate_coverage_one_provider", &rate_coverage_one_provider, py::arg("c_m"),
          py::arg("params"));

    m.def(
        "nearest_cdf",
        [](double h1, double c_m, const NetworkParams& params) {
            return nearest_cdf(h1, c_m, params);
        },
        py::arg("h1"), py::arg("c_m"), py::arg("params"));
    m.def(
        "nearest_pdf_exact",
        [](double h1, double c_m, const NetworkParams& params) {
            return nearest_pdf_exact(h1, c_m, params);
        },
        py::arg("h1"), py::arg("c_m"), py::arg("params"));
    m.def("nearest_pdf_jensen", &nearest_pdf_jensen, py::arg("h1"), py::arg("c_m"),
          py::arg("params"));
    m.def("nearest_cdf_jensen", &nearest_cdf_jensen, py::arg("h1"), py::arg("c_m"),
          py::arg("params"));
    m.def(
        "cond_mean",
        [](double h1, double c_m, const NetworkParams& params) {
            return cond_mean(h1, c_m, params);
        },
        py::arg("h1"), py::arg("c_m"), py::arg("params"));
    m.def(
        "cond_var",
        [](double h1, double c_m, const NetworkParams& params) {
            return cond_var(h1, c_m, params);
        },
        py::arg("h1"), py::arg("c_m"), py::arg("params"));

    m.def("offloading_gain_curve", &offloading_gain_curve, py::arg("c"), py::arg("q"),
          py::arg("upsilon"));

    m.def("estimate_rate_coverage", &estimate_rate_coverage, py::arg("scheme"),
          py::arg("params"), py::arg("c_m"), py::arg("options"));
    m.def("estimate_rate_coverage_all", &estimate_rate_coverage_all, py::arg("params"),
          py::arg("c_m"), py::arg("options"));
    m.def("estimate_offloading_gain", &estimate_offloading_gain, py::arg("params"),
          py::arg("content"), py::arg("caching"), py::arg("options"));
    m.def("energy_per_request", &energy_per_request, py::arg("q_m"), py::arg("c_m"),
          py::arg("n_bar"), py::arg("energy"), py::arg("theta"), py::arg("upsilon_m"));
    m.def("choose_window_radius", &choose_window_radius, py::arg("params"),
          py::arg("c_m"), py::arg("seed"));

    m.def(
        "objective_p1",
        [](const CachingVector& c, const NetworkParams& params,
           const ContentParams& content) { return objective_p1(c, params, content); },
        py::arg("c"), py::arg("params"), py::arg("content"));
    m.def("objective_p2", &objective_p2, py::arg("c"), py::arg("params"),
          py::arg("content"));
    m.def("optimize_p1", &optimize_p1, py::arg("params"), py::arg("content"),
          py::arg("settings") = OptimizerSettings{}, py::arg("seed") = 1);
    m.def("optimize_p2", &optimize_p2, py::arg("params"), py::arg("content"),
          py::arg("settings") = OptimizerSettings{});
    m.def("kkt_report_p2", &kkt_report_p2, py::arg("c"), py::arg("v"), py::arg("params"),
          py::arg("content"));
    m.def("normalized_entropy", &normalized_entropy, py::arg("c"));

    m.def("validate_config_text",
          [](const std::string& text) { return validate_config(parse_config(text)); });
    m.def("run_experiment_csv", [](const std::string& text) {
        const ExperimentConfig config = parse_config(text);
        const std::vector<std::string> violations = validate_config(config);
        if (!violations.empty()) {
            const std::string& first = violations.front();
            const std::size_t colon = first.find(": ");
            if (colon == std::string::npos) throw ConfigError("config", first);
            throw ConfigError(first.substr(0, colon), first.substr(colon + 2));
        }
        return format_csv(run_experiment(config), sha256_hex(text), config.seed);
    });
    m.def("recipe_names", &recipe_names);
    m.def("recipe_config", &recipe_config, py::arg("name"));
    m.def("sha256_hex", &sha256_hex, py::arg("text"));
}
