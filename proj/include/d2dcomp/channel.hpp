#pragma once

#include <optional>
#include <vector>

#include "d2dcomp/caching.hpp"
#include "d2dcomp/geometry.hpp"
#include "d2dcomp/rng.hpp"

namespace d2dcomp {

enum class DeliveryScheme {
    comp, // all in-cluster providers transmit the file jointly
    ncp,  // nearest in-cluster provider transmits alone
    rscp, // one uniformly chosen in-cluster provider transmits alone
};

struct SirSample {
    double desired = 0.0;      // received desired power (includes gamma_d)
    double interference = 0.0; // total interference power (includes gamma_d)
    double sir = 0.0;          // computed scale-free as desired/interference
};

/// Bounded power-law path loss: max(d, floor)^-alpha with floor = 1e-3 m, so
/// a provider sampled arbitrarily close to the client cannot produce an
/// infinite power.
double path_loss(double distance, double alpha);

/// Non-coherent joint transmission over the given provider distances with
/// i.i.d. CN(0,1) per-link fading: |sum_i G_i d_i^{-alpha/2}|^2 scaled by
/// gamma_d. Exponentially distributed with mean gamma_d * sum_i d_i^-alpha.
double desired_power_comp(const std::vector<double>& distances, double alpha,
                          double gamma_d, Rng& rng);

/// Aggregate interference at the origin from every active device in the
/// given clusters, each with independent unit-mean exponential fading.
double interference_power(const std::vector<Cluster>& clusters, double alpha,
                          double gamma_d, Rng& rng);

/// One SIR draw for a scheme given the in-cluster provider distances and the
/// interfering clusters. NCP uses the nearest provider, RSCP a uniformly
/// random one; with a single provider all three schemes coincide.
SirSample sir_for_scheme(DeliveryScheme scheme,
                         const std::vector<double>& provider_distances,
                         const std::vector<Cluster>& interferers, double alpha,
                         double gamma_d, Rng& rng);

/// Draw one cache set per member of every cluster in the network. Only the
/// representative cluster's caches affect delivery (interference does not
/// depend on what interferers store), but all clusters are filled so a
/// realization is self-consistent.
void assign_caches(NetworkRealization& network, const CachingVector& caching,
                   Rng& rng);

/// Same draw on a sampled network: providers are the representative cluster's
/// active members caching `file`; every other cluster interferes. Returns
/// nullopt when no member provides the file.
std::optional<SirSample> sir_for_scheme(DeliveryScheme scheme,
                                        const NetworkRealization& network,
                                        int file, const NetworkParams& params,
                                        Rng& rng);

} // namespace d2dcomp
