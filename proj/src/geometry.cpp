#include "d2dcomp/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "d2dcomp/special.hpp"

namespace d2dcomp {

void NetworkParams::validate() const {
    if (!(lambda_p > 0.0) || !std::isfinite(lambda_p))
        throw std::invalid_argument("lambda_p must be positive and finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be positive and finite");
    if (!(n_bar > 0.0) || !std::isfinite(n_bar))
        throw std::invalid_argument("n_bar must be positive and finite");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("p must lie in [0, 1]");
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be greater than 2");
    if (!(gamma_d > 0.0) || !std::isfinite(gamma_d))
        throw std::invalid_argument("gamma_d must be positive and finite");
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("theta must be nonnegative and finite");
}

double rayleigh_pdf(double r, double scale) {
    if (r < 0.0) throw std::invalid_argument("r must be nonnegative");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    const double z = r / scale;
    return z / scale * std::exp(-0.5 * z * z);
}

double rician_pdf(double u, double v, double sigma) {
    if (u < 0.0) throw std::invalid_argument("u must be nonnegative");
    if (v < 0.0) throw std::invalid_argument("v must be nonnegative");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    // (u/s^2) e^{-(u^2+v^2)/2s^2} I0(uv/s^2) rearranged around the scaled
    // Bessel so the e^{uv/s^2} growth cancels before it can overflow.
    const double s2 = sigma * sigma;
    const double diff = (u - v) / sigma;
    return u / s2 * std::exp(-0.5 * diff * diff) * bessel_i0_scaled(u * v / s2);
}

std::vector<Vec2> sample_parent_ppp(double lambda_p, double window_radius, Rng& rng) {
    if (!(lambda_p >= 0.0) || !std::isfinite(lambda_p))
        throw std::invalid_argument("lambda_p must be nonnegative and finite");
    if (!(window_radius >= 0.0) || !std::isfinite(window_radius))
        throw std::invalid_argument("window_radius must be nonnegative and finite");
    const double mean = lambda_p * M_PI * window_radius * window_radius;
    if (!(mean > 0.0)) return {};
    std::poisson_distribution<long long> count(mean);
    const long long n = count(rng);
    std::vector<Vec2> points;
    points.reserve(static_cast<std::size_t>(n));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long long i = 0; i < n; ++i) {
        const double r = window_radius * std::sqrt(unif(rng));
        const double a = 2.0 * M_PI * unif(rng);
        points.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return points;
}

std::vector<Vec2> sample_gaussian_offsets(std::size_t count, double sigma, Rng& rng) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be positive and finite");
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<Vec2> offsets;
    offsets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        offsets.push_back({x, y});
    }
    return offsets;
}

TypicalCluster sample_typical_cluster(const NetworkParams& params, double c_m, Rng& rng) {
    params.validate();
    if (!(c_m >= 0.0 && c_m <= 1.0))
        throw std::invalid_argument("c_m must lie in [0, 1]");
    TypicalCluster cluster;
    std::normal_distribution<double> gauss(0.0, params.sigma);
    {
        const double x = gauss(rng);
        const double y = gauss(rng);
        cluster.center = {x, y};
    }
    const double mu = c_m * params.p * params.n_bar;
    long long k = 0;
    if (mu > 0.0) {
        std::poisson_distribution<long long> count(mu);
        k = count(rng);
    }
    cluster.provider_distances.reserve(static_cast<std::size_t>(k));
    for (long long i = 0; i < k; ++i) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        cluster.provider_distances.push_back((cluster.center + Vec2{x, y}).norm());
    }
    return cluster;
}

NetworkRealization sample_network_realization(const NetworkParams& params,
                                              double window_radius, Rng& rng) {
    params.validate();
    if (!(window_radius > 0.0) || !std::isfinite(window_radius))
        throw std::invalid_argument("window_radius must be positive and finite");
    NetworkRealization net;
    net.window_radius = window_radius;

    std::normal_distribution<double> gauss(0.0, params.sigma);
    std::poisson_distribution<long long> members(params.n_bar);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto fill_members = [&](Cluster& cluster) {
        const long long n = members(rng);
        cluster.offsets.reserve(static_cast<std::size_t>(n));
        cluster.active.reserve(static_cast<std::size_t>(n));
        for (long long i = 0; i < n; ++i) {
            const double x = gauss(rng);
            const double y = gauss(rng);
            cluster.offsets.push_back({x, y});
            cluster.active.push_back(unif(rng) < params.p ? 1 : 0);
        }
    };

    {
        const double x = gauss(rng);
        const double y = gauss(rng);
        net.representative.center = {x, y};
    }
    fill_members(net.representative);

    const std::vector<Vec2> parents = sample_parent_ppp(params.lambda_p, window_radius, rng);
    net.remotes.reserve(parents.size());
    for (const Vec2& center : parents) {
        Cluster cluster;
        cluster.center = center;
        fill_members(cluster);
        net.remotes.push_back(std::move(cluster));
    }
    return net;
}

} // namespace d2dcomp
