#include "d2dcomp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "d2dcomp/errors.hpp"
#include "d2dcomp/rng.hpp"
#include "d2dcomp/special.hpp"

namespace d2dcomp {

namespace {

// Distances this many scattering deviations out carry ~e^{-72} of the mass;
// integrating past them only destabilizes the adaptive subdivision.
constexpr double kRicianWindow = 12.0;
// The nearest-distance densities live on h^2/(4 sigma^2) <~ 45.
constexpr double kNearestWindow = 14.0;

double pow_minus_alpha(double h, double alpha) {
    if (alpha == 4.0) {
        const double inv = 1.0 / (h * h);
        return inv * inv;
    }
    return std::pow(h, -alpha);
}

QuadratureSettings tighten(const QuadratureSettings& qs) {
    QuadratureSettings inner = qs;
    inner.rel_tol = std::max(qs.rel_tol * 1e-2, 1e-10);
    inner.abs_tol = std::max(qs.abs_tol * 1e-2, 1e-14);
    return inner;
}

void check_c_m(double c_m) {
    if (!(c_m >= 0.0 && c_m <= 1.0))
        throw std::invalid_argument("c_m must lie in [0, 1]");
}

void check_h1(double h1) {
    if (!(h1 >= 0.0) || !std::isfinite(h1))
        throw std::invalid_argument("h1 must be nonnegative and finite");
}

// Marginal device-to-origin distance density, Rayleigh(sqrt(2) sigma).
double member_distance_pdf(double h, double sigma) {
    const double s2 = 2.0 * sigma * sigma;
    return h / s2 * std::exp(-h * h / (2.0 * s2));
}

// Conditional CDF of a provider distance given the cluster center at v0.
double rician_cdf(double h1, double v0, double sigma, const QuadratureSettings& qs) {
    if (h1 <= 0.0) return 0.0;
    const double lo = std::max(0.0, v0 - kRicianWindow * sigma);
    if (h1 <= lo) return 0.0;
    return integrate([&](double h) { return rician_pdf(h, v0, sigma); }, lo, h1, qs);
}

// Shared Poisson mixture over the provider count: sum_k P(K=k) E_h[L(t(S_k))]
// with S_k the partial sums of i.i.d. Rayleigh(sqrt(2) sigma) powers.
template <typename LaplaceFn>
double provider_mixture(double c_m, const NetworkParams& params, int k_max,
                        std::uint64_t mc_samples, std::uint64_t seed,
                        LaplaceFn&& laplace) {
    params.validate();
    check_c_m(c_m);
    if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
    if (mc_samples < 1) throw std::invalid_argument("mc_samples must be positive");

    const double mu = c_m * params.p * params.n_bar;
    if (mu <= 0.0) return 0.0;
    if (std::exp(-mu) == 0.0)
        throw NumericError("provider mean too large for direct Poisson weights");

    // Poisson weights; auto-truncate where the remaining tail mass is < 1e-6.
    std::vector<double> pmf;
    pmf.push_back(std::exp(-mu));
    if (k_max == 0) {
        double cum = pmf[0];
        const std::size_t cap =
            static_cast<std::size_t>(mu + 40.0 * std::sqrt(mu + 1.0) + 100.0);
        while (1.0 - cum >= 1e-6 && pmf.size() <= cap) {
            pmf.push_back(pmf.back() * mu / static_cast<double>(pmf.size()));
            cum += pmf.back();
        }
        k_max = static_cast<int>(pmf.size()) - 1;
        if (k_max == 0) k_max = 1; // mu so small that K=0 holds all the mass
    }
    while (pmf.size() <= static_cast<std::size_t>(k_max))
        pmf.push_back(pmf.back() * mu / static_cast<double>(pmf.size()));

    std::vector<double> averaged(static_cast<std::size_t>(k_max) + 1, 0.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double two_sigma = 2.0 * params.sigma;
    // One substream per sample: raising k_max extends each tuple instead of
    // reshuffling the stream, so truncation refinement only adds tail terms.
    for (std::uint64_t j = 0; j < mc_samples; ++j) {
        Rng rng = make_rng(seed, j);
        double s = 0.0;
        for (int k = 1; k <= k_max; ++k) {
            const double h = two_sigma * std::sqrt(-std::log1p(-unif(rng)));
            s += pow_minus_alpha(h, params.alpha);
            averaged[k] += laplace(params.theta / (params.gamma_d * s));
        }
    }

    double total = 0.0;
    for (int k = 1; k <= k_max; ++k)
        total += pmf[k] * averaged[k] / static_cast<double>(mc_samples);
    return total;
}

// Fritsch-Carlson monotone cubic tangents for strictly increasing data.
std::vector<double> monotone_tangents(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    std::vector<double> m(n);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) m[i] = 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m[i] = m[i + 1] = 0.0;
            continue;
        }
        const double a = m[i] / d[i];
        const double b = m[i + 1] / d[i];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            m[i] = tau * a * d[i];
            m[i + 1] = tau * b * d[i];
        }
    }
    return m;
}

} // namespace

double zeta(double v, double t, const NetworkParams& params,
            const QuadratureSettings& qs) {
    params.validate();
    qs.validate();
    if (v < 0.0) throw std::invalid_argument("v must be nonnegative");
    if (t <= 0.0) return 0.0;
    const double tg = t * params.gamma_d;
    const double lo = std::max(0.0, v - kRicianWindow * params.sigma);
    const double hi = v + kRicianWindow * params.sigma;
    const bool quartic = params.alpha == 4.0;
    const auto kernel = [&](double u) {
        const double u2 = u * u;
        const double ua = quartic ? u2 * u2 : std::pow(u, params.alpha);
        return tg / (ua + tg) * rician_pdf(u, v, params.sigma);
    };
    // The kernel turns over at u = (t gamma_d)^{1/alpha}; when that knee sits
    // inside the window, integrate the plateau linearly and the power tail in
    // log space, where its decay is exponential and the subdivision converges.
    const double knee = std::pow(tg, 1.0 / params.alpha);
    if (knee > lo && knee < hi) {
        const double plateau = integrate(kernel, lo, knee, qs);
        const double tail = integrate(
            [&](double x) {
                const double u = std::exp(x);
                return kernel(u) * u;
            },
            std::log(knee), std::log(hi), qs);
        return plateau + tail;
    }
    return integrate(kernel, lo, hi, qs);
}

double laplace_exact_exponent(double t, const NetworkParams& params,
                              const QuadratureSettings& qs) {
    params.validate();
    qs.validate();
    if (t <= 0.0) return 0.0;
    const double rate = params.p * params.n_bar;
    if (rate <= 0.0) return 0.0;
    const QuadratureSettings inner = tighten(qs);
    // Characteristic radius of the kernel transition, for the tail map scale.
    const double scale =
        std::max(params.sigma, std::pow(t * params.gamma_d, 1.0 / params.alpha));
    const double outer = integrate_half_line(
        [&](double v) {
            const double z = zeta(v, t, params, inner);
            return -std::expm1(-rate * z) * v;
        },
        0.0, qs, scale);
    return 2.0 * M_PI * params.lambda_p * outer;
}

double laplace_exact(double t, const NetworkParams& params,
                     const QuadratureSettings& qs) {
    return std::exp(-laplace_exact_exponent(t, params, qs));
}

double laplace_ppp_bound(double t, const NetworkParams& params) {
    params.validate();
    if (t <= 0.0) return 1.0;
    const double u = 2.0 / params.alpha;
    const double exponent = M_PI * params.p * params.n_bar * params.lambda_p *
                            std::pow(t * params.gamma_d, u) *
                            interference_gamma_product(params.alpha);
    return std::exp(-exponent);
}

LaplaceTable::LaplaceTable(const NetworkParams& params, double t_min, double t_max,
                           int points, const QuadratureSettings& qs) {
    params.validate();
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw std::invalid_argument("t_min/t_max must satisfy 0 < t_min < t_max");
    if (points < 4) throw std::invalid_argument("points must be at least 4");
    slope_edge_ = 2.0 / params.alpha;
    log_t_.resize(static_cast<std::size_t>(points));
    log_e_.resize(static_cast<std::size_t>(points));
    const double l0 = std::log(t_min);
    const double l1 = std::log(t_max);
    for (int i = 0; i < points; ++i) {
        const double lt = l0 + (l1 - l0) * i / (points - 1);
        const double e = laplace_exact_exponent(std::exp(lt), params, qs);
        if (!(e > 0.0))
            throw NumericError("transform exponent must be positive on the table grid");
        log_t_[i] = lt;
        log_e_[i] = std::log(e);
    }
    deriv_ = monotone_tangents(log_t_, log_e_);
}

double LaplaceTable::exponent(double t) const {
    if (t <= 0.0) return 0.0;
    const double lt = std::log(t);
    if (lt <= log_t_.front())
        return std::exp(log_e_.front() + slope_edge_ * (lt - log_t_.front()));
    if (lt >= log_t_.back())
        return std::exp(log_e_.back() + slope_edge_ * (lt - log_t_.back()));
    const auto it = std::upper_bound(log_t_.begin(), log_t_.end(), lt);
    const std::size_t i = static_cast<std::size_t>(it - log_t_.begin()) - 1;
    const double w = log_t_[i + 1] - log_t_[i];
    const double s = (lt - log_t_[i]) / w;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double value = (2.0 * s3 - 3.0 * s2 + 1.0) * log_e_[i] +
                         (s3 - 2.0 * s2 + s) * w * deriv_[i] +
                         (-2.0 * s3 + 3.0 * s2) * log_e_[i + 1] +
                         (s3 - s2) * w * deriv_[i + 1];
    return std::exp(value);
}

double LaplaceTable::operator()(double t) const { return std::exp(-exponent(t)); }

double rate_coverage_exact(double c_m, const NetworkParams& params, int k_max,
                           std::uint64_t mc_samples, std::uint64_t seed,
                           const LaplaceTable* table, const QuadratureSettings& qs) {
    const LaplaceTable local =
        table ? LaplaceTable(*table) : LaplaceTable(params, 1e-8, 1e10, 181, qs);
    return provider_mixture(c_m, params, k_max, mc_samples, seed,
                            [&](double t) { return local(t); });
}

double rate_coverage_bound(double c_m, const NetworkParams& params, int k_max,
                           std::uint64_t mc_samples, std::uint64_t seed) {
    params.validate();
    const double u = 2.0 / params.alpha;
    const double coeff = M_PI * params.p * params.n_bar * params.lambda_p *
                         std::pow(params.gamma_d, u) *
                         interference_gamma_product(params.alpha);
    return provider_mixture(c_m, params, k_max, mc_samples, seed, [&](double t) {
        return t <= 0.0 ? 1.0 : std::exp(-coeff * std::pow(t, u));
    });
}

double nearest_cdf(double h1, double c_m, const NetworkParams& params,
                   const QuadratureSettings& qs) {
    params.validate();
    check_c_m(c_m);
    check_h1(h1);
    const double mu = c_m * params.p * params.n_bar;
    if (mu <= 0.0 || h1 == 0.0) return 0.0;
    const QuadratureSettings inner = tighten(qs);
    const double survive = integrate(
        [&](double v0) {
            return rayleigh_pdf(v0, params.sigma) *
                   std::exp(-mu * rician_cdf(h1, v0, params.sigma, inner));
        },
        0.0, kRicianWindow * params.sigma, qs);
    return 1.0 - survive;
}

double nearest_pdf_exact(double h1, double c_m, const NetworkParams& params,
                         const QuadratureSettings& qs) {
    params.validate();
    check_c_m(c_m);
    check_h1(h1);
    const double mu = c_m * params.p * params.n_bar;
    if (mu <= 0.0 || h1 == 0.0) return 0.0;
    const QuadratureSettings inner = tighten(qs);
    return integrate(
        [&](double v0) {
            return rayleigh_pdf(v0, params.sigma) * mu *
                   rician_pdf(h1, v0, params.sigma) *
                   std::exp(-mu * rician_cdf(h1, v0, params.sigma, inner));
        },
        0.0, kRicianWindow * params.sigma, qs);
}

double nearest_pdf_jensen(double h1, double c_m, const NetworkParams& params) {
    params.validate();
    check_c_m(c_m);
    check_h1(h1);
    const double mu = c_m * params.p * params.n_bar;
    if (mu <= 0.0) return 0.0;
    const double s2 = 2.0 * params.sigma * params.sigma;
    const double x = h1 * h1 / (2.0 * s2);
    return mu * h1 / s2 * std::exp(mu * std::expm1(-x) - x);
}

double nearest_cdf_jensen(double h1, double c_m, const NetworkParams& params) {
    params.validate();
    check_c_m(c_m);
    check_h1(h1);
    const double mu = c_m * params.p * params.n_bar;
    if (mu <= 0.0) return 0.0;
    const double x = h1 * h1 / (4.0 * params.sigma * params.sigma);
    return -std::expm1(mu * std::expm1(-x));
}

double cond_mean(double h1, double c_m, const NetworkParams& params,
                 const QuadratureSettings& qs) {
    params.validate();
    check_c_m(c_m);
    if (!(h1 > 0.0) || !std::isfinite(h1))
        throw std::invalid_argument("h1 must be positive and finite");
    const double a = c_m * params.p * params.n_bar;
    if (a <= 0.0) return 0.0;
    const double sigma = params.sigma;
    if (params.alpha == 4.0) {
        const double x = h1 * h1 / (4.0 * sigma * sigma);
        const double s4 = sigma * sigma * sigma * sigma;
        return a / (16.0 * s4) * upper_incomplete_gamma(-1.0, x);
    }
    const double x = h1 * h1 / (4.0 * sigma * sigma);
    const double hi = 2.0 * sigma * std::sqrt(x + 45.0);
    return a * integrate(
                   [&](double h) {
                       return pow_minus_alpha(h, params.alpha) *
                              member_distance_pdf(h, sigma);
                   },
                   h1, hi, qs);
}

double cond_var(double h1, double c_m, const NetworkParams& params,
                const QuadratureSettings& qs) {
    params.validate();
    check_c_m(c_m);
    if (!(h1 > 0.0) || !std::isfinite(h1))
        throw std::invalid_argument("h1 must be positive and finite");
    const double a = c_m * params.p * params.n_bar;
    if (a <= 0.0) return 0.0;
    const double sigma = params.sigma;
    if (params.alpha == 4.0) {
        const double x = h1 * h1 / (4.0 * sigma * sigma);
        return a * std::pow(2.0 * sigma, -8.0) * upper_incomplete_gamma(-3.0, x);
    }
    const double x = h1 * h1 / (4.0 * sigma * sigma);
    const double hi = 2.0 * sigma * std::sqrt(x + 45.0);
    return a * integrate(
                   [&](double h) {
                       const double g = pow_minus_alpha(h, params.alpha);
                       return g * g * member_distance_pdf(h, sigma);
                   },
                   h1, hi, qs);
}

namespace {

// Decondition L(t(h1)) over the nearest-provider distance law.
template <typename ArgFn>
double nearest_deconditioning(double c_m, const NetworkParams& params,
                              NearestPdfVariant variant, const LaplaceTable* table,
                              const QuadratureSettings& qs, ArgFn&& t_of_h) {
    params.validate();
    check_c_m(c_m);
    const double mu = c_m * params.p * params.n_bar;
    if (mu <= 0.0) return 0.0;
    const LaplaceTable local =
        table ? LaplaceTable(*table) : LaplaceTable(params, 1e-8, 1e10, 181, qs);
    auto density = [&](double h1) {
        return variant == NearestPdfVariant::jensen
                   ? nearest_pdf_jensen(h1, c_m, params)
                   : nearest_pdf_exact(h1, c_m, params, qs);
    };
    return integrate([&](double h1) { return density(h1) * local(t_of_h(h1)); }, 0.0,
                     kNearestWindow * params.sigma, qs);
}

} // namespace

double rate_coverage_approx(double c_m, const NetworkParams& params,
                            NearestPdfVariant variant, const LaplaceTable* table,
                            const QuadratureSettings& qs) {
    return nearest_deconditioning(c_m, params, variant, table, qs, [&](double h1) {
        const double denom =
            pow_minus_alpha(h1, params.alpha) + cond_mean(h1, c_m, params, qs);
        return params.theta / (params.gamma_d * denom);
    });
}

double rate_coverage_ncp(double c_m, const NetworkParams& params,
                         NearestPdfVariant variant, const LaplaceTable* table,
                         const QuadratureSettings& qs) {
    return nearest_deconditioning(c_m, params, variant, table, qs, [&](double h1) {
        return params.theta * std::pow(h1, params.alpha) / params.gamma_d;
    });
}

double z_factor(const NetworkParams& params) {
    params.validate();
    const double u = 2.0 / params.alpha;
    return 4.0 * params.sigma * params.sigma * M_PI * params.p * params.n_bar *
               params.lambda_p * std::pow(params.theta, u) *
               interference_gamma_product(params.alpha) +
           1.0;
}

double rate_coverage_one_provider(double c_m, const NetworkParams& params) {
    params.validate();
    check_c_m(c_m);
    const double mu = c_m * params.p * params.n_bar;
    return -std::expm1(-mu) / z_factor(params);
}

double offloading_gain_curve(const CachingVector& c, const std::vector<double>& q,
                             const std::function<double(double)>& upsilon) {
    if (c.empty() || c.size() != q.size())
        throw std::invalid_argument("c and q must be nonempty and equally sized");
    if (!upsilon) throw std::invalid_argument("upsilon must be callable");
    double total = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        if (!(c[m] >= 0.0 && c[m] <= 1.0))
            throw std::invalid_argument("c entries must lie in [0, 1]");
        if (!(q[m] > 0.0) || !std::isfinite(q[m]))
            throw std::invalid_argument("q entries must be positive and finite");
        total += q[m] * (c[m] + (1.0 - c[m]) * upsilon(c[m]));
    }
    return total;
}

} // namespace d2dcomp
