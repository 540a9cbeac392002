#include "d2dcomp/caching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace d2dcomp {

void ContentParams::validate() const {
    if (n_files < 1) throw std::invalid_argument("n_files must be at least 1");
    if (cache_size < 1 || cache_size > n_files)
        throw std::invalid_argument("cache_size must lie in [1, n_files]");
    if (popularity.size() != static_cast<std::size_t>(n_files))
        throw std::invalid_argument("popularity must have one entry per file");
    double total = 0.0;
    for (std::size_t m = 0; m < popularity.size(); ++m) {
        const double q = popularity[m];
        if (!(q > 0.0) || !std::isfinite(q))
            throw std::invalid_argument("popularity entries must be positive and finite");
        if (m > 0 && q > popularity[m - 1])
            throw std::invalid_argument("popularity must be non-increasing");
        total += q;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("popularity must sum to 1");
}

ContentParams ContentParams::zipf(int n_files, int cache_size, double beta) {
    ContentParams content;
    content.n_files = n_files;
    content.cache_size = cache_size;
    content.popularity = zipf_popularity(n_files, beta);
    content.validate();
    return content;
}

std::vector<double> zipf_popularity(int n_files, double beta) {
    if (n_files < 1) throw std::invalid_argument("n_files must be at least 1");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be nonnegative and finite");
    std::vector<double> q(static_cast<std::size_t>(n_files));
    double total = 0.0;
    for (int m = 0; m < n_files; ++m) {
        q[m] = std::exp(-beta * std::log(static_cast<double>(m + 1)));
        total += q[m];
    }
    for (double& v : q) v /= total;
    return q;
}

CachingVector scheme_cpf(const ContentParams& content) {
    content.validate();
    // Stable argsort by descending popularity, so ties keep file order.
    std::vector<int> order(static_cast<std::size_t>(content.n_files));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return content.popularity[a] > content.popularity[b];
    });
    CachingVector c(static_cast<std::size_t>(content.n_files), 0.0);
    for (int i = 0; i < content.cache_size; ++i) c[order[i]] = 1.0;
    return c;
}

CachingVector scheme_rc(const ContentParams& content) {
    content.validate();
    const double value = static_cast<double>(content.cache_size) / content.n_files;
    return CachingVector(static_cast<std::size_t>(content.n_files), value);
}

CachingVector scheme_zipf(const ContentParams& content) {
    content.validate();
    const std::size_t n = content.popularity.size();
    // Water-filling for c_m = min(1, kappa q_m): pin the files kappa pushes
    // past 1 and re-solve kappa exactly over the remainder. Terminates in at
    // most n passes.
    std::vector<char> pinned(n, 0);
    int pinned_count = 0;
    for (;;) {
        double free_mass = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            if (!pinned[m]) free_mass += content.popularity[m];
        const double remaining = content.cache_size - pinned_count;
        if (remaining <= 0.0 || free_mass <= 0.0) break;
        const double kappa = remaining / free_mass;
        bool changed = false;
        for (std::size_t m = 0; m < n; ++m) {
            if (!pinned[m] && kappa * content.popularity[m] >= 1.0) {
                pinned[m] = 1;
                ++pinned_count;
                changed = true;
            }
        }
        if (!changed) {
            CachingVector c(n, 0.0);
            for (std::size_t m = 0; m < n; ++m)
                c[m] = pinned[m] ? 1.0 : kappa * content.popularity[m];
            return c;
        }
    }
    // Everything pinned: cache_size == n_files.
    return CachingVector(n, 1.0);
}

CacheSet sample_cache_set(const CachingVector& c, Rng& rng) {
    if (c.empty()) throw std::invalid_argument("c must be nonempty");
    double total = 0.0;
    for (double v : c) {
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
            throw std::invalid_argument("c entries must lie in [0, 1]");
        total += std::min(1.0, std::max(0.0, v));
    }
    const int size = static_cast<int>(std::lround(total));
    if (std::fabs(total - size) > 1e-6 || size < 1)
        throw std::invalid_argument("c must sum to a positive integer");

    // Systematic sampling: lay the probabilities end to end over [0, total)
    // and take the segments hit by u, u+1, ..., u+size-1. Each segment is at
    // most 1 long and the intervals are half-open, so the size hits are
    // distinct and every file is picked with marginal probability c_m.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    CacheSet set;
    set.reserve(static_cast<std::size_t>(size));
    double cum = 0.0;
    std::size_t file = 0;
    for (int k = 0; k < size; ++k) {
        const double target = u + k;
        while (file + 1 < c.size() && cum + std::min(1.0, std::max(0.0, c[file])) <= target) {
            cum += std::min(1.0, std::max(0.0, c[file]));
            ++file;
        }
        set.push_back(static_cast<int>(file));
    }
    return set;
}

} // namespace d2dcomp
