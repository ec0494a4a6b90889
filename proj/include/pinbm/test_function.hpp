#pragma once

#include <cmath>
#include <stdexcept>

#include "pinbm/manifold.hpp"

namespace pinbm {

namespace detail {

/// Associated Legendre P_l^m(x) (no Condon-Shortley phase), m >= 0.
inline double assoc_legendre(int l, int m, double x) {
    double pmm = 1.0;
    if (m > 0) {
        const double somx2 = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
        double fact = 1.0;
        for (int i = 0; i < m; ++i) {
            pmm *= fact * somx2;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmmp1 = x * (2 * m + 1) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = ((2 * ll - 1) * x * pmmp1 - (ll + m - 1) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

}  // namespace detail

/// Smooth test functions with closed-form Laplace-Beltrami values where the
/// id admits one (eigenfunctions); the bump has an evaluator only.
struct TestFunction {
    enum class Id { circle_mode, ellipse_mode, sphere_harmonic, bump, constant };

    Id id = Id::constant;
    int k = 0;           // frequency / degree l
    int m = 0;           // sphere harmonic order
    PointParam center{}; // bump
    double width = 1.0;  // bump

    static TestFunction constant() { return {}; }
    static TestFunction circle_mode(int k) { return {Id::circle_mode, k, 0, {}, 1.0}; }
    static TestFunction ellipse_mode(int k) { return {Id::ellipse_mode, k, 0, {}, 1.0}; }
    static TestFunction sphere_harmonic(int l, int m = 0) {
        if (l < 0 || std::abs(m) > l) throw std::invalid_argument("sphere_harmonic: need |m| <= l");
        return {Id::sphere_harmonic, l, m, {}, 1.0};
    }
    static TestFunction bump(PointParam center, double width) {
        if (!(width > 0.0)) throw std::invalid_argument("bump: width must be > 0");
        return {Id::bump, 0, 0, center, width};
    }

    double value(const Manifold& mf, PointParam x) const {
        switch (id) {
            case Id::constant:
                return 1.0;
            case Id::circle_mode:
                return std::cos(k * x[0] / mf.radius());
            case Id::ellipse_mode:
                return std::cos(2.0 * M_PI * k * x[0] / mf.perimeter());
            case Id::sphere_harmonic: {
                const double plm = detail::assoc_legendre(k, std::abs(m), std::cos(x[0]));
                if (m > 0) return plm * std::cos(m * x[1]);
                if (m < 0) return plm * std::sin(-m * x[1]);
                return plm;
            }
            case Id::bump: {
                const double d = mf.geodesic_distance(x, center);
                return std::exp(-(d * d) / (width * width));
            }
        }
        return 0.0;
    }

    bool has_laplacian() const { return id != Id::bump; }

    /// Laplace-Beltrami value (Laplacian of the arc-length/angular chart).
    double laplacian(const Manifold& mf, PointParam x) const {
        switch (id) {
            case Id::constant:
                return 0.0;
            case Id::circle_mode: {
                const double om = k / mf.radius();
                return -om * om * value(mf, x);
            }
            case Id::ellipse_mode: {
                const double om = 2.0 * M_PI * k / mf.perimeter();
                return -om * om * value(mf, x);
            }
            case Id::sphere_harmonic: {
                const double r = mf.radius();
                return -k * (k + 1) / (r * r) * value(mf, x);
            }
            case Id::bump:
                throw std::logic_error("bump has no closed-form Laplacian");
        }
        return 0.0;
    }
};

}  // namespace pinbm
