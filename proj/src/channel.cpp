#include "d2dcomp/channel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace d2dcomp {

namespace {

constexpr double kPathLossFloor = 1e-3; // meters

// Shared interference accumulation, unscaled by gamma_d.
double interference_sum(const std::vector<Cluster>& clusters, double alpha, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double total = 0.0;
    for (const Cluster& cluster : clusters) {
        for (std::size_t i = 0; i < cluster.offsets.size(); ++i) {
            if (!cluster.active[i]) continue;
            const double u = (cluster.center + cluster.offsets[i]).norm();
            const double fading = -std::log1p(-unif(rng)); // Exp(1)
            total += fading * path_loss(u, alpha);
        }
    }
    return total;
}

} // namespace

double path_loss(double distance, double alpha) {
    if (distance < 0.0) throw std::invalid_argument("distance must be nonnegative");
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be greater than 2");
    const double d = std::max(distance, kPathLossFloor);
    if (alpha == 4.0) {
        const double inv = 1.0 / (d * d);
        return inv * inv;
    }
    return std::pow(d, -alpha);
}

double desired_power_comp(const std::vector<double>& distances, double alpha,
                          double gamma_d, Rng& rng) {
    if (distances.empty()) throw std::invalid_argument("distances must be nonempty");
    std::normal_distribution<double> gauss(0.0, M_SQRT1_2); // CN(0,1) parts
    double re = 0.0;
    double im = 0.0;
    for (double d : distances) {
        const double amp = std::sqrt(path_loss(d, alpha));
        re += gauss(rng) * amp;
        im += gauss(rng) * amp;
    }
    return gamma_d * (re * re + im * im);
}

double interference_power(const std::vector<Cluster>& clusters, double alpha,
                          double gamma_d, Rng& rng) {
    return gamma_d * interference_sum(clusters, alpha, rng);
}

SirSample sir_for_scheme(DeliveryScheme scheme,
                         const std::vector<double>& provider_distances,
                         const std::vector<Cluster>& interferers, double alpha,
                         double gamma_d, Rng& rng) {
    if (provider_distances.empty())
        throw std::invalid_argument("provider_distances must be nonempty");

    // Per-provider scaled gains drawn once; every scheme reads the same
    // values, so with a single provider all schemes coincide bitwise.
    const std::size_t k = provider_distances.size();
    std::normal_distribution<double> gauss(0.0, M_SQRT1_2);
    std::vector<double> re(k);
    std::vector<double> im(k);
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double amp = std::sqrt(path_loss(provider_distances[i], alpha));
        re[i] = gauss(rng) * amp;
        im[i] = gauss(rng) * amp;
        if (provider_distances[i] < provider_distances[nearest]) nearest = i;
    }
    std::size_t chosen = 0;
    if (k > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        chosen = pick(rng);
    }

    double sum_re = 0.0;
    double sum_im = 0.0;
    std::size_t index = nearest;
    switch (scheme) {
    case DeliveryScheme::comp:
        for (std::size_t i = 0; i < k; ++i) {
            sum_re += re[i];
            sum_im += im[i];
        }
        break;
    case DeliveryScheme::ncp:
        sum_re = re[nearest];
        sum_im = im[nearest];
        break;
    case DeliveryScheme::rscp:
        index = chosen;
        sum_re = re[index];
        sum_im = im[index];
        break;
    }
    const double x = sum_re * sum_re + sum_im * sum_im;
    const double y = interference_sum(interferers, alpha, rng);

    SirSample sample;
    sample.desired = gamma_d * x;
    sample.interference = gamma_d * y;
    sample.sir = y > 0.0 ? x / y : std::numeric_limits<double>::infinity();
    return sample;
}

void assign_caches(NetworkRealization& network, const CachingVector& caching,
                   Rng& rng) {
    auto fill = [&](Cluster& cluster) {
        cluster.caches.clear();
        cluster.caches.reserve(cluster.offsets.size());
        for (std::size_t i = 0; i < cluster.offsets.size(); ++i)
            cluster.caches.push_back(sample_cache_set(caching, rng));
    };
    fill(network.representative);
    for (Cluster& cluster : network.remotes) fill(cluster);
}

std::optional<SirSample> sir_for_scheme(DeliveryScheme scheme,
                                        const NetworkRealization& network,
                                        int file, const NetworkParams& params,
                                        Rng& rng) {
    if (file < 0) throw std::invalid_argument("file must be nonnegative");
    const Cluster& rep = network.representative;
    std::vector<double> providers;
    for (std::size_t i = 0; i < rep.offsets.size(); ++i) {
        if (!rep.active[i]) continue;
        const auto& cache = rep.caches[i];
        bool holds = false;
        for (int cached : cache)
            if (cached == file) {
                holds = true;
                break;
            }
        if (holds) providers.push_back((rep.center + rep.offsets[i]).norm());
    }
    if (providers.empty()) return std::nullopt;
    return sir_for_scheme(scheme, providers, network.remotes, params.alpha,
                          params.gamma_d, rng);
}

} // namespace d2dcomp
