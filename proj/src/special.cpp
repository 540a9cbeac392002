#include "d2dcomp/special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace d2dcomp {

double bessel_i0_scaled(double x) {
    if (x < 0.0 || !std::isfinite(x))
        throw std::invalid_argument("bessel_i0_scaled: x must be nonnegative and finite");
    if (x < 15.0) {
        // Power series for I0, scaled afterwards; at x < 15 the sum tops out
        // near 3.4e5 so there is no overflow risk.
        const double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 80; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-x);
    }
    // Asymptotic expansion e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k a_k x^{-k},
    // a_0 = 1, a_{k+1} = a_k (2k+1)^2 / (8(k+1)). The series is divergent, so
    // stop at the smallest term; for x >= 15 that leaves a relative error
    // below ~2e-10.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 12; ++k) {
        const double next =
            term * ((2.0 * k + 1.0) * (2.0 * k + 1.0)) / (8.0 * (k + 1.0) * x);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

namespace {

// Continued fraction for Gamma(s, x) by modified Lentz. Convergent for any
// real s once x exceeds s + 1, which holds for every s <= 0 with x >= 1.5.
double gamma_upper_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 300; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(s * std::log(x) - x) * h;
}

} // namespace

double upper_incomplete_gamma(double s, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("upper_incomplete_gamma: x must be positive and finite");
    if (!std::isfinite(s))
        throw std::invalid_argument("upper_incomplete_gamma: s must be finite");
    if (s > 0.0) return boost::math::tgamma(s, x);
    if (x >= 1.5) return gamma_upper_cf(s, x);
    // Small x: start from a base order in (0, 1] where the function is
    // directly available and walk down with
    //   Gamma(s-1, x) = (Gamma(s, x) - x^{s-1} e^{-x}) / (s - 1).
    // For x < 1.5 the subtrahend dominates at every step, so the recurrence
    // does not cancel.
    const double s0 = s - std::floor(s); // fractional part, in [0, 1)
    double g = (s0 == 0.0) ? boost::math::expint(1, x) : boost::math::tgamma(s0, x);
    for (double cur = s0; cur > s + 0.5; cur -= 1.0) {
        const double next = cur - 1.0;
        g = (g - std::exp(next * std::log(x) - x)) / next;
    }
    return g;
}

double interference_gamma_product(double alpha) {
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha: must be greater than 2");
    // Gamma(1+u) Gamma(1-u) = pi u / sin(pi u), u = 2/alpha in (0, 1).
    const double u = 2.0 / alpha;
    return M_PI * u / std::sin(M_PI * u);
}

} // namespace d2dcomp
