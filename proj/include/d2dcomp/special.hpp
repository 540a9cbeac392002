#pragma once

namespace d2dcomp {

/// Exponentially scaled modified Bessel function e^{-x} I0(x), x >= 0.
/// Power series below x = 15, asymptotic expansion above; relative error
/// stays below ~1e-10 over the full range, with no overflow for any x.
double bessel_i0_scaled(double x);

/// Upper incomplete gamma Gamma(s, x) for any real s and x > 0.
/// Nonpositive and negative s are reached by the downward recurrence
/// Gamma(s, x) = (Gamma(s+1, x) - x^s e^{-x}) / s from a positive-parameter
/// base case (Gamma(0, x) = E1(x) on the integer ladder).
double upper_incomplete_gamma(double s, double x);

/// Gamma(1 + 2/alpha) * Gamma(1 - 2/alpha); the interference scaling
/// constant of the PPP-equivalent bound. Requires alpha > 2 (pole at 2).
double interference_gamma_product(double alpha);

} // namespace d2dcomp
