#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "d2dcomp/errors.hpp"

namespace d2dcomp {

struct QuadratureSettings {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    int max_subdivisions = 12; // adaptive bisection depth

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("quadrature tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("max_subdivisions must be >= 1");
    }
};

/// Adaptive Gauss-Kronrod on a finite interval. Throws NumericError when the
/// error estimate cannot be pushed below the requested tolerances.
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureSettings& qs = {}) {
    if (!(b > a)) return 0.0;
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, qs.max_subdivisions, qs.rel_tol, &error);
    if (!std::isfinite(value) ||
        (error > qs.abs_tol && error > 100.0 * qs.rel_tol * std::abs(value))) {
        std::ostringstream msg;
        msg << "quadrature failed on [" << a << ", " << b << "]: value=" << value
            << " error-estimate=" << error;
        throw NumericError(msg.str());
    }
    return value;
}

/// Adaptive quadrature over [lower, infinity), mapped through
/// u = lower + scale * x/(1-x) so the infinite tail lands on x -> 1. `scale`
/// should match the integrand's characteristic length so the mass is not
/// crammed against either endpoint.
template <typename F>
double integrate_half_line(F&& f, double lower, const QuadratureSettings& qs = {},
                           double scale = 1.0) {
    auto mapped = [&f, lower, scale](double x) {
        const double om = 1.0 - x;
        const double u = lower + scale * x / om;
        return f(u) * scale / (om * om);
    };
    return integrate(mapped, 0.0, 1.0, qs);
}

} // namespace d2dcomp
