#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "d2dcomp/caching.hpp"
#include "d2dcomp/geometry.hpp"
#include "d2dcomp/quadrature.hpp"

namespace d2dcomp {

/// Inner angular-averaged interference kernel
///   zeta(v, t) = E_u[ t gamma_d / (u^alpha + t gamma_d) ],  u ~ Rician(v, sigma).
/// Lies in [0, 1]; 0 at t = 0 and -> 1 as t -> infinity.
double zeta(double v, double t, const NetworkParams& params,
            const QuadratureSettings& qs = {});

/// Laplace transform of the out-of-cluster interference, evaluated at the
/// composite argument t = theta / (gamma_d * s):
///   L(t) = exp(-2 pi lambda_p Int_0^inf (1 - e^{-p n_bar zeta(v,t)}) v dv).
double laplace_exact(double t, const NetworkParams& params,
                     const QuadratureSettings& qs = {});

/// -ln laplace_exact(t); computed directly so tiny transforms never underflow.
double laplace_exact_exponent(double t, const NetworkParams& params,
                              const QuadratureSettings& qs = {});

/// Closed-form transform of the homogeneous PPP with matched mean density
/// p n_bar lambda_p: exp(-pi p n_bar lambda_p (t gamma_d)^{2/alpha} G),
/// G = Gamma(1 + 2/alpha) Gamma(1 - 2/alpha). Lower-bounds laplace_exact, so
/// every rate coverage built on it is a lower bound.
double laplace_ppp_bound(double t, const NetworkParams& params);

/// Precomputed interpolant of laplace_exact over a log-t grid. Stores
/// (ln t, ln(-ln L)) with monotone cubic interpolation; outside the grid it
/// extrapolates linearly in that plane with slope 2/alpha, the transform
/// exponent's true asymptotic order at both ends.
class LaplaceTable {
public:
    explicit LaplaceTable(const NetworkParams& params, double t_min = 1e-8,
                          double t_max = 1e10, int points = 181,
                          const QuadratureSettings& qs = {});

    double operator()(double t) const; // L(t)
    double exponent(double t) const;   // -ln L(t)

private:
    double slope_edge_ = 0.5; // 2/alpha
    std::vector<double> log_t_;
    std::vector<double> log_e_; // ln(-ln L)
    std::vector<double> deriv_; // monotone cubic tangents
};

/// Rate coverage deconditioned over the provider count K ~ Poisson(c_m p n_bar)
/// and the provider distances (i.i.d. Rayleigh(sqrt(2) sigma), the marginal
/// inter-member law): sum_k P(K=k) E_h[L(theta / (gamma_d sum h_i^-alpha))].
/// k_max = 0 truncates where the Poisson tail drops below 1e-6; the h
/// expectation is a fixed-seed Monte Carlo average over mc_samples tuples.
/// `table` optionally reuses a transform interpolant built from the same
/// network parameters.
double rate_coverage_exact(double c_m, const NetworkParams& params, int k_max = 0,
                           std::uint64_t mc_samples = 100000,
                           std::uint64_t seed = 20240901,
                           const LaplaceTable* table = nullptr,
                           const QuadratureSettings& qs = {});

/// Same deconditioning with the closed-form PPP transform; lower-bounds the
/// exact expression and needs no quadrature.
double rate_coverage_bound(double c_m, const NetworkParams& params, int k_max = 0,
                           std::uint64_t mc_samples = 100000,
                           std::uint64_t seed = 20240901);

/// CDF of the distance to the nearest active caching provider. Defective:
/// the limit at infinity is 1 - exp(-c_m p n_bar), the provider-availability
/// mass.
double nearest_cdf(double h1, double c_m, const NetworkParams& params,
                   const QuadratureSettings& qs = {});

/// Density of the nearest-provider distance, by outer quadrature over the
/// cluster-center distance.
double nearest_pdf_exact(double h1, double c_m, const NetworkParams& params,
                         const QuadratureSettings& qs = {});

/// Closed-form density/CDF after pulling the center average into the exponent
/// (Jensen step): with mu = c_m p n_bar and x = h1^2 / 4 sigma^2,
///   f(h1) = mu h1 / (2 sigma^2) exp(-mu (1 - e^{-x}) - x).
double nearest_pdf_jensen(double h1, double c_m, const NetworkParams& params);
double nearest_cdf_jensen(double h1, double c_m, const NetworkParams& params);

/// Mean/variance of the residual provider power sum_{i>=2} h_i^-alpha given
/// the nearest provider at h1 > 0, under the marginal-intensity model
/// (residual providers: Poisson process with intensity c_m p n_bar f_H on
/// (h1, inf)). alpha = 4 uses the closed incomplete-gamma forms; other alpha
/// evaluates the defining integrals by quadrature.
double cond_mean(double h1, double c_m, const NetworkParams& params,
                 const QuadratureSettings& qs = {});
double cond_var(double h1, double c_m, const NetworkParams& params,
                const QuadratureSettings& qs = {});

enum class NearestPdfVariant { exact, jensen };

/// Mean-plus-nearest approximation: condition on the nearest provider at h1,
/// replace the residual power by cond_mean(h1), decondition over h1 with the
/// chosen nearest-distance density:
///   integral of L(t(h1)) f_H1(h1), t(h1) = (theta/gamma_d)/(h1^-alpha + cond_mean).
double rate_coverage_approx(double c_m, const NetworkParams& params,
                            NearestPdfVariant variant = NearestPdfVariant::jensen,
                            const LaplaceTable* table = nullptr,
                            const QuadratureSettings& qs = {});

/// Nearest-provider-only delivery: the residual term is dropped, so
/// t(h1) = theta h1^alpha / gamma_d. Never exceeds rate_coverage_approx.
double rate_coverage_ncp(double c_m, const NetworkParams& params,
                         NearestPdfVariant variant = NearestPdfVariant::jensen,
                         const LaplaceTable* table = nullptr,
                         const QuadratureSettings& qs = {});

/// Fully closed-form single-provider model: (1 - e^{-c_m p n_bar}) / Z.
double rate_coverage_one_provider(double c_m, const NetworkParams& params);

/// Z = 4 sigma^2 pi p n_bar lambda_p theta^{2/alpha} G + 1 with
/// G = Gamma(1 + 2/alpha) Gamma(1 - 2/alpha); > 1 whenever theta > 0.
double z_factor(const NetworkParams& params);

/// Offloading gain from any per-file rate-coverage functional:
///   sum_m q_m (c_m + (1 - c_m) upsilon(c_m)).
double offloading_gain_curve(const CachingVector& c, const std::vector<double>& q,
                             const std::function<double(double)>& upsilon);

} // namespace d2dcomp
