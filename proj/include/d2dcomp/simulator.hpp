#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "d2dcomp/caching.hpp"
#include "d2dcomp/channel.hpp"
#include "d2dcomp/geometry.hpp"

namespace d2dcomp {

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

struct SimulationOptions {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;          // 0: hardware concurrency
    double window_radius = 0; // 0: chosen adaptively per geometry

    void validate() const; // throws std::invalid_argument naming the field
};

struct EnergyParams {
    double p_d_watts = 0.1; // per-provider transmit power
    double s_bar_bits = 4e7; // mean file size
    double w_hz = 5e6;       // bandwidth

    void validate() const;
};

/// Fraction of trials in which the typical client finds at least one active
/// provider caching the requested file and the scheme's SIR reaches theta.
/// Trials are chunked and combined in a fixed order, each trial on its own
/// sub-seeded generator, so results are bitwise identical for any thread
/// count.
Estimate estimate_rate_coverage(DeliveryScheme scheme, const NetworkParams& params,
                                double c_m, const SimulationOptions& options);

/// One pass evaluating all three schemes on shared realizations (same
/// geometry, fading, and interference per trial). Indexed by DeliveryScheme.
std::array<Estimate, 3> estimate_rate_coverage_all(const NetworkParams& params,
                                                   double c_m,
                                                   const SimulationOptions& options);

/// Per-trial SIRs for all three schemes on shared realizations; a trial with
/// no provider yields -1 in every slot (an SIR is never negative). Lets one
/// simulation serve a whole threshold sweep.
std::vector<std::array<double, 3>> sample_sir_all(const NetworkParams& params,
                                                  double c_m,
                                                  const SimulationOptions& options);

/// Offloading gain: each trial draws a request from the popularity law, serves
/// it from the local cache with probability c_m, otherwise runs a coverage
/// trial against the file's provider process.
Estimate estimate_offloading_gain(const NetworkParams& params,
                                  const ContentParams& content,
                                  const CachingVector& caching,
                                  const SimulationOptions& options);

/// Mean energy the cluster spends per request for file m:
///   q_m c_m n_bar P_d S_bar / (W log2(1 + theta) upsilon_m).
/// Throws NumericError when the delivered rate is zero (upsilon_m <= 0 or
/// theta = 0); returns 0 for c_m = 0.
double energy_per_request(double q_m, double c_m, double n_bar,
                          const EnergyParams& energy, double theta,
                          double upsilon_m);

/// Smallest simulation window radius whose coverage estimate is already
/// stable: starting from the radius holding ~300 parents, paired pilots with
/// common random numbers compare each radius against its double, accepting
/// when the coverage shift is within one binomial standard error.
double choose_window_radius(const NetworkParams& params, double c_m,
                            std::uint64_t seed);

} // namespace d2dcomp
