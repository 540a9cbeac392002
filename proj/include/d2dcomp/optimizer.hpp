#pragma once

#include <cstdint>

#include "d2dcomp/analytics.hpp"
#include "d2dcomp/caching.hpp"
#include "d2dcomp/geometry.hpp"

namespace d2dcomp {

struct OptimizerSettings {
    double bisection_tol = 1e-9;   // cache-budget residual |sum c - M|
    int max_iter = 60;             // surrogate fixed-point iterations
    int multistart_count = 10;     // random starts beside the warm start
    double fixed_point_tol = 1e-6; // sup-norm stop for the fixed point
    bool iterate_surrogate = true; // refresh the linearization point

    void validate() const; // throws std::invalid_argument naming the field
};

struct OptimResult {
    CachingVector c_star;
    double objective = 0.0;
    double v_star = 0.0; // budget multiplier at the solution
    int iterations = 0;
    bool converged = true;
    double budget_residual = 0.0;        // |sum c - M| certificate
    double stationarity_residual = 0.0;  // max KKT violation certificate
};

/// Offloading gain under the mean-plus-nearest rate coverage (the P1
/// objective): sum_m q_m (c_m + (1 - c_m) rate_coverage_approx(c_m)).
/// Checks only sizes and ranges, not popularity normalization, so scaled
/// popularity vectors evaluate to scaled objectives.
double objective_p1(const CachingVector& c, const NetworkParams& params,
                    const ContentParams& content,
                    const LaplaceTable* table = nullptr);

/// Offloading gain under the single-provider rate coverage (the P2
/// objective): sum_m q_m (c_m + (1 - c_m)(1 - e^{-a c_m}) / Z), a = p n_bar.
double objective_p2(const CachingVector& c, const NetworkParams& params,
                    const ContentParams& content);

/// Maximizes objective_p1 subject to sum c = M, 0 <= c <= 1. Per-file
/// linearization of the rate coverage turns each step into a concave
/// water-filling solved exactly; the linearization point is refreshed by a
/// damped fixed point, multistarted from random vectors and the P2 solution.
/// The raw P2 vector competes in the final candidate pool, so the returned
/// objective never falls below the P2 vector's.
OptimResult optimize_p1(const NetworkParams& params, const ContentParams& content,
                        const OptimizerSettings& settings = {},
                        std::uint64_t seed = 1);

/// Maximizes objective_p2 exactly: the objective is strictly concave per
/// file, so bisection on the budget multiplier v with per-file inversion of
/// the derivative yields the unique KKT point.
OptimResult optimize_p2(const NetworkParams& params, const ContentParams& content,
                        const OptimizerSettings& settings = {});

struct KktReport {
    double budget_residual = 0.0;
    double max_stationarity_violation = 0.0;
};

/// Recomputes the P2 KKT residuals of (c, v) from scratch: interior files
/// must satisfy phi'(c_m) = v, saturated files the matching inequality.
KktReport kkt_report_p2(const CachingVector& c, double v,
                        const NetworkParams& params, const ContentParams& content);

/// Entropy of the normalized caching vector c / M in nats over ln(n_files);
/// 1 for uniform caching, 0 when one file holds the whole budget.
double normalized_entropy(const CachingVector& c);

} // namespace d2dcomp
