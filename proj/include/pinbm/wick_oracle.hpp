#pragma once

#include <cmath>
#include <stdexcept>

#include "pinbm/gauss_legendre.hpp"
#include "pinbm/wick.hpp"

namespace pinbm {

namespace detail {

/// 1-D factor of the tensor-product cube quadrature:
/// int_{-R}^{R} (2 pi t)^{-1/2} e^{-x^2/2t} x^p dx with an n-node rule.
/// The tensor-product sum over the cube factorizes exactly into these.
inline double gauss_factor_1d(int p, double t, double radius, const GaussLegendreRule& rule) {
    if (p % 2 == 1) return 0.0;  // odd integrand on a symmetric interval
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * t);
    double sum = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double x = radius * rule.nodes[i];
        sum += rule.weights[i] * std::exp(-x * x / (2.0 * t)) * std::pow(x, p);
    }
    return norm * radius * sum;
}

inline double oracle_once(const MultiIndex& k, double t, double radius, const GaussLegendreRule& rule) {
    double prod = std::pow(t, k.t_power);
    for (int p : k.space) prod *= gauss_factor_1d(p, t, radius, rule);
    return prod;
}

}  // namespace detail

/// Numerical check value for gaussian_moment: tensor-product Gauss-Legendre
/// quadrature of (2 pi t)^{-n/2} e^{-|xi|^2/2t} p_k(t, xi) over the cube
/// [-radius, radius]^n, node count doubled until the value moves by less
/// than 1e-12 relative. Independent of the closed-form path. radius <= 0
/// selects the default 8*sqrt(t*n).
inline double gaussian_moment_oracle(const MultiIndex& k, double t, double radius = 0.0) {
    if (!(t > 0.0)) throw std::domain_error("gaussian_moment_oracle: t must be > 0");
    if (k.dim() > 4) throw std::domain_error("gaussian_moment_oracle: n > 4 not supported");
    if (k.degree().is_negative())
        throw std::domain_error("gaussian_moment_oracle: degree(k) < 0");
    const double min_radius = 8.0 * std::sqrt(t * k.dim());
    if (radius <= 0.0)
        radius = min_radius;
    else if (radius < min_radius)
        throw std::invalid_argument("gaussian_moment_oracle: radius below 8*sqrt(t*n)");

    double prev = detail::oracle_once(k, t, radius, gauss_legendre(64));
    for (int n = 128; n <= 4096; n *= 2) {
        double cur = detail::oracle_once(k, t, radius, gauss_legendre(n));
        if (std::abs(cur - prev) < 1e-12 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw std::runtime_error("gaussian_moment_oracle: quadrature did not converge");
}

inline double gaussian_moment_oracle(const Polynomial& f, double t, double radius = 0.0) {
    double sum = 0.0;
    for (const auto& [k, c] : f.terms()) sum += c * gaussian_moment_oracle(k, t, radius);
    return sum;
}

}  // namespace pinbm
