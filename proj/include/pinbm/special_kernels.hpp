#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pinbm {

/// Heat kernel of the circle of given circumference at time t (generator
/// Laplacian/2), as the wrapped Gaussian image sum. Terms are added until
/// they fall below 1e-17 of the partial sum.
inline double wrapped_heat_kernel(double circumference, double t, double arc) {
    if (!(circumference > 0.0)) throw std::invalid_argument("wrapped_heat_kernel: circumference");
    if (!(t > 0.0)) throw std::domain_error("wrapped_heat_kernel: t must be > 0");
    const double P = circumference;
    double a = std::fmod(arc, P);
    if (a < -P / 2) a += P;
    if (a > P / 2) a -= P;
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * t);
    double sum = std::exp(-a * a / (2.0 * t));
    for (int j = 1; j < 10000; ++j) {
        const double p = a + j * P, q = a - j * P;
        const double term = std::exp(-p * p / (2.0 * t)) + std::exp(-q * q / (2.0 * t));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return norm * sum;
}

/// Legendre polynomial P_l(x) by upward recurrence.
inline double legendre_p(int l, double x) {
    if (l == 0) return 1.0;
    if (l == 1) return x;
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= l; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

namespace detail {
inline int sphere_series_lmax(double tau) {
    // first l with (2l+1) e^{-l(l+1) tau/2} below 1e-15
    int l = 1;
    while ((2 * l + 1) * std::exp(-0.5 * l * (l + 1) * tau) > 1e-15) {
        ++l;
        if (l > 2000) throw std::runtime_error("sphere heat series: did not truncate");
    }
    return l;
}
}  // namespace detail

/// Heat kernel of the 2-sphere of radius r (generator Laplacian/2) at
/// geodesic angle in [0, pi], via the Legendre series. Rejects t < 1e-4 r^2
/// where the series would need far too many terms; tiny negative ringing is
/// clamped.
inline double sphere_heat_kernel(double r, double t, double geodesic_angle) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_heat_kernel: radius");
    if (!(t > 0.0)) throw std::domain_error("sphere_heat_kernel: t must be > 0");
    const double tau = t / (r * r);
    if (tau < 1e-4) throw std::domain_error("sphere_heat_kernel: t < 1e-4 r^2 outside operating range");
    const double x = std::cos(geodesic_angle);
    const int lmax = detail::sphere_series_lmax(tau);
    double p0 = 1.0, p1 = x, sum = 1.0;
    if (lmax >= 1) sum += 3.0 * std::exp(-tau) * x;
    for (int l = 2; l <= lmax; ++l) {
        const double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
        sum += (2 * l + 1) * std::exp(-0.5 * l * (l + 1) * tau) * p2;
    }
    double v = sum / (4.0 * M_PI * r * r);
    const double peak = 1.0 / (2.0 * M_PI * t);
    if (v < 0.0) {
        if (v < -1e-12 * peak) throw std::runtime_error("sphere_heat_kernel: series ringing too large");
        v = 0.0;
    }
    return std::max(v, 1e-300);  // keep strictly positive for log-weights
}

/// Probability that the geodesic angle from the start point is <= angle
/// under the time-t sphere heat kernel (marginal CDF in the angle).
inline double sphere_heat_cdf(double r, double t, double angle) {
    if (angle <= 0.0) return 0.0;
    if (angle >= M_PI) return 1.0;
    const double tau = t / (r * r);
    if (tau < 1e-4) throw std::domain_error("sphere_heat_cdf: t < 1e-4 r^2 outside operating range");
    const double x = std::cos(angle);
    const int lmax = detail::sphere_series_lmax(tau);
    // integral identity: int_x^1 P_l = (P_{l-1}(x) - P_{l+1}(x)) / (2l+1)
    double f = 0.5 * (1.0 - x);
    double pm1 = 1.0, p = x;
    for (int l = 1; l <= lmax; ++l) {
        const double pp1 = ((2 * l + 1) * x * p - l * pm1) / (l + 1);
        f += 0.5 * std::exp(-0.5 * l * (l + 1) * tau) * (pm1 - pp1);
        pm1 = p;
        p = pp1;
    }
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace pinbm
