#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "d2dcomp/caching.hpp"
#include "d2dcomp/errors.hpp"
#include "d2dcomp/simulator.hpp"
#include "support/checks.hpp"

using namespace d2dcomp;

TEST_CASE("simulation options validation names the field") {
    SimulationOptions options;
    options.trials = 0;
    CHECK_THROWS_WITH_AS(options.validate(), doctest::Contains("trials"),
                         std::invalid_argument);
    options = SimulationOptions{};
    options.threads = -1;
    CHECK_THROWS_WITH_AS(options.validate(), doctest::Contains("threads"),
                         std::invalid_argument);
    options = SimulationOptions{};
    options.window_radius = -5.0;
    CHECK_THROWS_WITH_AS(options.validate(), doctest::Contains("window_radius"),
                         std::invalid_argument);
    CHECK_NOTHROW(SimulationOptions{}.validate());
}

TEST_CASE("estimates are bitwise identical across thread counts") {
    const auto result = checks::check_thread_determinism(601, 2000);
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("delivery schemes are ordered within noise") {
    const auto result = checks::check_scheme_ordering(602, 3000);
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("coverage responds monotonically to the main parameters") {
    const auto result = checks::check_coverage_monotone_mc(603, 3000);
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("offloading gain is exactly 1 when every file is cached locally") {
    NetworkParams params;
    const ContentParams content = ContentParams::zipf(5, 5, 0.7);
    const CachingVector everything(5, 1.0);
    SimulationOptions options;
    options.trials = 500;
    options.seed = 604;
    const Estimate est = estimate_offloading_gain(params, content, everything, options);
    CHECK(est.mean == 1.0);
    CHECK(est.std_error == 0.0);
    CHECK(est.trials == 500);
}

TEST_CASE("offloading estimate agrees with the per-file combination") {
    const auto result = checks::check_offloading_consistency(605, 6000);
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("energy per request: frozen value, limits, and failure modes") {
    EnergyParams energy;
    energy.p_d_watts = 0.1;
    energy.s_bar_bits = 4e7;
    energy.w_hz = 5e6;
    const double theta = std::pow(10.0, 0.8);

    // Hand value: 6 * 0.1 * 4e7 / (5e6 * log2(1 + 10^0.8) * 0.5).
    CHECK(energy_per_request(1.0, 1.0, 6.0, energy, theta, 0.5) ==
          doctest::Approx(3.3451957468733724).epsilon(1e-14));

    // Scales linearly in q_m and c_m, inversely in coverage.
    CHECK(energy_per_request(0.5, 1.0, 6.0, energy, theta, 0.5) ==
          doctest::Approx(0.5 * 3.3451957468733724).epsilon(1e-14));
    CHECK(energy_per_request(1.0, 0.0, 6.0, energy, theta, 0.5) == 0.0);
    CHECK(energy_per_request(1.0, 1.0, 6.0, energy, theta, 0.25) >
          energy_per_request(1.0, 1.0, 6.0, energy, theta, 0.5));
    CHECK(energy_per_request(1.0, 1.0, 12.0, energy, theta, 0.5) >
          energy_per_request(1.0, 1.0, 6.0, energy, theta, 0.5));

    CHECK_THROWS_AS(energy_per_request(1.0, 1.0, 6.0, energy, theta, 0.0),
                    NumericError);
    CHECK_THROWS_AS(energy_per_request(1.0, 1.0, 6.0, energy, 0.0, 0.5),
                    NumericError);
}

TEST_CASE("window radius selection is positive and deterministic") {
    NetworkParams params;
    params.lambda_p = 10e-6;
    const double r1 = choose_window_radius(params, 0.5, 606);
    const double r2 = choose_window_radius(params, 0.5, 606);
    CHECK(r1 > 0.0);
    CHECK(r1 == r2);
}
