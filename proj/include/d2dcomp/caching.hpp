#pragma once

#include <cstddef>
#include <vector>

#include "d2dcomp/rng.hpp"

namespace d2dcomp {

/// Content library description: N_f files, per-device cache capacity, and a
/// request-popularity distribution over files (descending by convention when
/// Zipf-generated, but arbitrary q summing to 1 is accepted).
struct ContentParams {
    int n_files = 12;
    int cache_size = 2;
    std::vector<double> popularity; // size n_files, sums to 1

    void validate() const; // throws std::invalid_argument naming the field

    static ContentParams zipf(int n_files, int cache_size, double beta);
};

/// Per-file caching probabilities c_m in [0,1] with sum == cache_size.
using CachingVector = std::vector<double>;

/// Zipf popularity q_m proportional to m^-beta, m = 1..n_files. beta = 0 is
/// uniform; large beta concentrates on the first file.
std::vector<double> zipf_popularity(int n_files, double beta);

/// Deterministic most-popular caching: c_m = 1 for the cache_size most
/// popular files, 0 elsewhere.
CachingVector scheme_cpf(const ContentParams& content);

/// Uniform random caching: c_m = cache_size / n_files for every file.
CachingVector scheme_rc(const ContentParams& content);

/// Popularity-proportional caching c_m = min(1, kappa q_m) with kappa chosen
/// so the probabilities sum to cache_size. Files pinned at 1 are held there
/// exactly while kappa is re-solved over the remainder.
CachingVector scheme_zipf(const ContentParams& content);

using CacheSet = std::vector<int>;

/// Draw one device's cache: exactly cache_size distinct file indices with
/// per-file marginal inclusion probability c_m. Uses the interval-placement
/// construction (lay the c_m as consecutive segments of total length
/// cache_size, draw one uniform u, pick the segments hit by u + k for
/// k = 0..cache_size-1), so a single uniform drives the whole draw.
CacheSet sample_cache_set(const CachingVector& c, Rng& rng);

} // namespace d2dcomp
