#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "pinbm/polynomial.hpp"

namespace pinbm {

/// n!! in exact integer arithmetic, with (-1)!! = 0!! = 1. Rejects n > 32:
/// larger orders are outside the range the moment formulas are used at, and
/// the product would silently lose integer exactness.
inline std::uint64_t double_factorial(int n) {
    if (n < -1) throw std::domain_error("double_factorial: n < -1");
    if (n > 32) throw std::domain_error("double_factorial: n > 32 not supported");
    std::uint64_t r = 1;
    for (int m = n; m > 1; m -= 2) r *= static_cast<std::uint64_t>(m);
    return r;
}

/// Short-time Gaussian moment of the monomial t^{k0} xi^k against the
/// centered Gaussian with covariance t*I: zero when any space exponent is
/// odd, otherwise t^{d(k)} * prod (k_i - 1)!!.
inline double gaussian_moment(const MultiIndex& k, double t) {
    if (!(t > 0.0)) throw std::domain_error("gaussian_moment: t must be > 0");
    if (k.degree().is_negative())
        throw std::domain_error("gaussian_moment: degree(k) < 0 diverges as t -> 0");
    if (!k.all_space_even()) return 0.0;
    std::uint64_t df = 1;
    for (int ki : k.space) {
        if (ki > 33) throw std::domain_error("gaussian_moment: space exponent > 33");
        std::uint64_t f = double_factorial(ki - 1);
        if (df > UINT64_MAX / f) throw std::overflow_error("gaussian_moment: factorial overflow");
        df *= f;
    }
    return std::pow(t, k.degree().value()) * static_cast<double>(df);
}

/// Termwise extension to polynomials.
inline double gaussian_moment(const Polynomial& f, double t) {
    double sum = 0.0;
    for (const auto& [k, c] : f.terms()) sum += c * gaussian_moment(k, t);
    return sum;
}

/// First-order increment of the Gaussian-integral quotient G_t(f h)/G_t(h)
/// relative to its t=0 value: equals G_t(f_1) for f = f_0 + f_{1/2} + f_1
/// with constant f_0 and h = 1 + h_1. The structure of f and h is validated,
/// not assumed.
inline double ratio_asymptotics(const Polynomial& f, const Polynomial& h, double t) {
    if (!(t > 0.0)) throw std::domain_error("ratio_asymptotics: t must be > 0");
    for (const auto& [k, c] : f.terms()) {
        HalfInt d = k.degree();
        if (d.is_negative() || d > HalfInt::from_int(1))
            throw std::invalid_argument("ratio_asymptotics: f must have degrees in {0, 1/2, 1}");
        if (d == HalfInt{0} && !k.is_constant())
            throw std::invalid_argument("ratio_asymptotics: degree-0 part of f must be constant");
    }
    bool has_unit = false;
    for (const auto& [k, c] : h.terms()) {
        if (k.is_constant()) {
            if (c != 1.0) throw std::invalid_argument("ratio_asymptotics: h must have constant term 1");
            has_unit = true;
        } else if (k.degree() != HalfInt::from_int(1)) {
            throw std::invalid_argument("ratio_asymptotics: h must be 1 + (degree-1 terms)");
        }
    }
    if (!has_unit) throw std::invalid_argument("ratio_asymptotics: h must have constant term 1");
    return gaussian_moment(f.homogeneous_component(HalfInt::from_int(1)), t);
}

}  // namespace pinbm
