#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "d2dcomp/rng.hpp"

namespace d2dcomp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }

/// Network-level parameters. All values linear and in SI units:
/// lambda_p in clusters per square meter, sigma in meters.
struct NetworkParams {
    double lambda_p = 30e-6; // parent (cluster) density, m^-2
    double sigma = 30.0;     // Gaussian scattering std dev, m
    double n_bar = 6.0;      // mean devices per cluster
    double p = 0.5;          // provider activity probability
    double alpha = 4.0;      // path-loss exponent
    double gamma_d = 1.0;    // normalized transmit power
    double theta = 1.0;      // SIR threshold, linear

    void validate() const;   // throws std::invalid_argument naming the field
};

/// One sampled cluster: center position plus device offsets relative to it.
/// `active` marks devices transmitting this slot; `caches` (when populated)
/// holds each device's stored file indices, exactly cache_size per device.
struct Cluster {
    Vec2 center;
    std::vector<Vec2> offsets;
    std::vector<std::uint8_t> active;
    std::vector<std::vector<int>> caches;
};

/// A full network draw around the typical client at the origin: the
/// representative cluster (the one containing the client) plus all remote
/// clusters inside the simulation window.
struct NetworkRealization {
    Cluster representative;
    std::vector<Cluster> remotes;
    double window_radius = 0.0;
};

struct TypicalCluster {
    Vec2 center;                            // distance to origin ~ Rayleigh(sigma)
    std::vector<double> provider_distances; // ~ Rician(v0, sigma) given v0
};

/// Rayleigh density (r/scale^2) exp(-r^2 / 2 scale^2).
double rayleigh_pdf(double r, double scale);

/// Rician distance density (u/sigma^2) exp(-(u^2+v^2)/2sigma^2) I0(uv/sigma^2),
/// evaluated in log space with the scaled Bessel I0 so huge uv/sigma^2 cannot
/// overflow. v = 0 reduces exactly to rayleigh_pdf(u, sigma).
double rician_pdf(double u, double v, double sigma);

/// Homogeneous PPP on a disc of the given radius centered at the origin.
std::vector<Vec2> sample_parent_ppp(double lambda_p, double window_radius, Rng& rng);

/// i.i.d. zero-mean isotropic Gaussian offsets with per-axis std dev sigma.
std::vector<Vec2> sample_gaussian_offsets(std::size_t count, double sigma, Rng& rng);

/// The cluster containing the typical client: center at Rayleigh(sigma)
/// distance from the origin, Poisson(c_m * p * n_bar) active providers with
/// Gaussian offsets around the center. The client itself is never a provider.
TypicalCluster sample_typical_cluster(const NetworkParams& params, double c_m, Rng& rng);

/// Full realization: representative cluster members (activity-marked, caches
/// left empty) plus remote clusters on the window disc. Remote device counts
/// are Poisson(n_bar) with Bernoulli(p) activity marks.
NetworkRealization sample_network_realization(const NetworkParams& params,
                                              double window_radius, Rng& rng);

} // namespace d2dcomp
