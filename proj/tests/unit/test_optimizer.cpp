#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "d2dcomp/optimizer.hpp"
#include "support/checks.hpp"

using namespace d2dcomp;

TEST_CASE("settings validation names the field") {
    OptimizerSettings settings;
    settings.bisection_tol = 0.0;
    CHECK_THROWS_WITH_AS(settings.validate(), doctest::Contains("bisection_tol"),
                         std::invalid_argument);
    settings = OptimizerSettings{};
    settings.max_iter = 0;
    CHECK_THROWS_WITH_AS(settings.validate(), doctest::Contains("max_iter"),
                         std::invalid_argument);
    settings = OptimizerSettings{};
    settings.multistart_count = -1;
    CHECK_THROWS_WITH_AS(settings.validate(), doctest::Contains("multistart_count"),
                         std::invalid_argument);
    CHECK_NOTHROW(OptimizerSettings{}.validate());
}

TEST_CASE("objective closed values on saturated vectors") {
    NetworkParams params;
    const ContentParams content = ContentParams::zipf(6, 2, 0.9);
    CachingVector c(6, 0.0);
    c[0] = c[1] = 1.0;
    // c = 1 contributes q alone; c = 0 contributes nothing.
    const double expected = content.popularity[0] + content.popularity[1];
    CHECK(objective_p2(c, params, content) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(objective_p1(c, params, content) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("full budget pins every file") {
    NetworkParams params;
    const ContentParams content = ContentParams::zipf(5, 5, 0.8);
    for (const bool iterative : {false, true}) {
        const OptimResult r = iterative ? optimize_p1(params, content)
                                        : optimize_p2(params, content);
        for (const double x : r.c_star) CHECK(x == 1.0);
        CHECK(r.budget_residual < 1e-9);
    }
}

TEST_CASE("uniform popularity splits the budget evenly") {
    NetworkParams params;
    const ContentParams content = ContentParams::zipf(2, 1, 0.0);
    const OptimResult exact = optimize_p2(params, content);
    CHECK(exact.c_star[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(exact.c_star[1] == doctest::Approx(0.5).epsilon(1e-12));
    const OptimResult iterative = optimize_p1(params, content);
    CHECK(std::fabs(iterative.c_star[0] - 0.5) <= 1e-6);
    CHECK(std::fabs(iterative.c_star[1] - 0.5) <= 1e-6);
}

TEST_CASE("degenerate no-provider network reduces to the linear program") {
    NetworkParams params;
    params.p = 0.0; // providers never transmit: objective is sum q c
    const ContentParams content = ContentParams::zipf(6, 2, 1.0);
    const OptimResult r = optimize_p2(params, content);
    CHECK(r.c_star[0] == 1.0);
    CHECK(r.c_star[1] == 1.0);
    for (std::size_t m = 2; m < 6; ++m) CHECK(r.c_star[m] == 0.0);
    CHECK(r.budget_residual < 1e-9);
}

TEST_CASE("more popular files never get less cache") {
    NetworkParams params;
    const ContentParams content = ContentParams::zipf(12, 3, 0.9);
    for (const bool iterative : {false, true}) {
        const OptimResult r = iterative ? optimize_p1(params, content)
                                        : optimize_p2(params, content);
        // The exact solver is strictly monotone; the iterative one can carry
        // fixed-point residue of the order of its stopping tolerance.
        const double slack = iterative ? 1e-5 : 1e-12;
        for (std::size_t m = 1; m < r.c_star.size(); ++m)
            CHECK(r.c_star[m] <= r.c_star[m - 1] + slack);
    }
}

TEST_CASE("kkt certificates hold at the returned solutions") {
    const auto result = checks::check_p2_kkt();
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("popularity scaling leaves the argmax unchanged") {
    const auto result = checks::check_q_scaling();
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("iterative solution dominates the surrogate solution") {
    const auto result = checks::check_p1_ge_p2();
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("objective concavity certificates") {
    const auto result = checks::check_objective_concavity();
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("optimizers improve on the static schemes under their own objective") {
    NetworkParams params;
    const ContentParams content = ContentParams::zipf(12, 2, 0.8);
    const OptimResult r2 = optimize_p2(params, content);
    const double best = objective_p2(r2.c_star, params, content);
    CHECK(best >= objective_p2(scheme_zipf(content), params, content) - 1e-9);
    CHECK(best >= objective_p2(scheme_cpf(content), params, content) - 1e-9);
    CHECK(best >= objective_p2(scheme_rc(content), params, content) - 1e-9);
}

TEST_CASE("normalized entropy: limits and validation") {
    CHECK(normalized_entropy({0.5, 0.5, 0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(normalized_entropy({1.0, 1e-14, 1e-14, 1e-14}) < 0.01);
    // Uniform beats any other split of the same budget.
    CHECK(normalized_entropy({0.9, 0.5, 0.3, 0.3}) < 1.0);
    CHECK_THROWS_AS(normalized_entropy({0.5}), std::invalid_argument);
    CHECK_THROWS_AS(normalized_entropy({0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(normalized_entropy({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("solutions sharpen as popularity skew grows") {
    NetworkParams params;
    double previous = 1.1;
    for (const double beta : {0.2, 0.6, 1.0, 1.6}) {
        const ContentParams content = ContentParams::zipf(12, 2, beta);
        const OptimResult r = optimize_p2(params, content);
        const double entropy = normalized_entropy(r.c_star);
        CHECK(entropy < previous);
        previous = entropy;
    }
}
