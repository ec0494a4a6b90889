#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "pinbm/density_exponent.hpp"
#include "pinbm/families.hpp"
#include "pinbm/manifold.hpp"
#include "pinbm/quadrature_grid.hpp"
#include "pinbm/special_kernels.hpp"

namespace pinbm {

class GridTooCoarse : public std::runtime_error {
public:
    explicit GridTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

/// Checks that a (family, manifold, ambient) combination is implemented.
/// Sphere-ambient heat restriction (small circle in S^2) sits behind a
/// feature flag.
inline void validate_family(const KernelFamily& fam, const Manifold& mf,
                            bool allow_sphere_ambient = false) {
    switch (fam.kind) {
        case KernelKind::intrinsic_gauss:
        case KernelKind::ambient_gauss:
            if (fam.ambient.type != AmbientSpec::Type::euclidean)
                throw UnsupportedCombination("gauss families use the Euclidean ambient space");
            return;
        case KernelKind::heat_restricted:
            switch (fam.ambient.type) {
                case AmbientSpec::Type::euclidean:
                    return;
                case AmbientSpec::Type::self_circle:
                    if (mf.kind() != ManifoldKind::circle)
                        throw UnsupportedCombination("self_circle ambient requires the circle");
                    return;
                case AmbientSpec::Type::sphere: {
                    if (!allow_sphere_ambient)
                        throw UnsupportedCombination(
                            "heat_restricted with sphere ambient requires the feature flag");
                    if (mf.kind() != ManifoldKind::circle)
                        throw UnsupportedCombination("sphere ambient supports circles only");
                    const double want = fam.ambient.sphere_radius * std::sin(fam.ambient.colatitude);
                    if (std::abs(mf.radius() - want) > 1e-9 * want)
                        throw UnsupportedCombination(
                            "circle radius must equal R*sin(colatitude) of the sphere ambient");
                    return;
                }
            }
    }
}

/// True when q_t(x, y) on a curve depends on the arc difference only, so
/// operator rows are circulant and one kernel row serves every node.
inline bool arc_translation_invariant(const KernelFamily& fam, const Manifold& mf) {
    if (!mf.is_curve()) return false;
    if (mf.kind() == ManifoldKind::circle) return true;
    return fam.kind == KernelKind::intrinsic_gauss ||
           (fam.kind == KernelKind::heat_restricted &&
            fam.ambient.type == AmbientSpec::Type::sphere);
}

namespace detail {

/// Geodesic angle on the ambient sphere between two small-circle points.
inline double small_circle_sphere_angle(const AmbientSpec& amb, const Manifold& mf, PointParam x,
                                        PointParam y) {
    const double rho = mf.radius();
    const double da = (x[0] - y[0]) / rho;
    const double c0 = std::cos(amb.colatitude), s0 = std::sin(amb.colatitude);
    const double c = std::clamp(c0 * c0 + s0 * s0 * std::cos(da), -1.0, 1.0);
    return std::acos(c);
}

}  // namespace detail

/// One-step kernel value q_t(x, y), including the family's normalizing
/// prefactor, so that the step mass int q_t(x,y) vol(dy) is e^{tD}+O(t^{3/2}).
inline double kernel_value(const KernelFamily& fam, const Manifold& mf, double t, PointParam x,
                           PointParam y) {
    if (!(t > 0.0)) throw std::domain_error("kernel_value: t must be > 0");
    const int l = mf.intrinsic_dim();
    const double pref = std::pow(2.0 * M_PI * t, -0.5 * l);
    switch (fam.kind) {
        case KernelKind::intrinsic_gauss: {
            const double d = mf.geodesic_distance(x, y);
            return pref * std::exp(-d * d / (2.0 * t));
        }
        case KernelKind::ambient_gauss: {
            const double d = mf.ambient_distance(x, y);
            return pref * std::exp(-d * d / (2.0 * t));
        }
        case KernelKind::heat_restricted:
            switch (fam.ambient.type) {
                case AmbientSpec::Type::euclidean: {
                    // (2 pi t)^{(m-l)/2} times the ambient Gaussian density
                    const double d = mf.ambient_distance(x, y);
                    return pref * std::exp(-d * d / (2.0 * t));
                }
                case AmbientSpec::Type::self_circle:
                    return wrapped_heat_kernel(mf.perimeter(), t,
                                               mf.reduce(x)[0] - mf.reduce(y)[0]);
                case AmbientSpec::Type::sphere: {
                    const double ang = detail::small_circle_sphere_angle(fam.ambient, mf, x, y);
                    return std::sqrt(2.0 * M_PI * t) *
                           sphere_heat_kernel(fam.ambient.sphere_radius, t, ang);
                }
            }
    }
    return 0.0;
}

/// Kernel multiplied by e^{-t D(x)}: the proper family whose Chernoff
/// products converge to the heat semigroup on L.
inline double rescaled_kernel_value(const KernelFamily& fam, const Manifold& mf, double t,
                                    PointParam x, PointParam y) {
    return kernel_value(fam, mf, t, x, y) *
           std::exp(-t * density_exponent(fam.kind, mf, x, fam.ambient));
}

namespace detail {

/// Iterates grid contributions w_j q_t(x, y_j) over the nodes that matter at
/// scale sqrt(t); the skipped tail is below e^{-50} of the peak. The window
/// is a deterministic function of (t, x), so sums are reproducible. Kernels
/// are evaluated from cached node geometry (same formulas as kernel_value).
template <typename Fn>
void for_each_kernel_weight(const KernelFamily& fam, const Manifold& mf, const QuadratureGrid& grid,
                            double t, PointParam x, Fn&& fn) {
    const bool chord_kernel =
        fam.kind == KernelKind::ambient_gauss ||
        (fam.kind == KernelKind::heat_restricted && fam.ambient.type != AmbientSpec::Type::self_circle);
    const double inv2t = 1.0 / (2.0 * t);
    if (grid.is_curve()) {
        const size_t n = grid.node_count();
        const double h = grid.curve_spacing();
        const double P = mf.perimeter();
        const double pref = 1.0 / std::sqrt(2.0 * M_PI * t);
        if (fam.kind == KernelKind::heat_restricted && fam.ambient.type == AmbientSpec::Type::sphere) {
            for (size_t j = 0; j < n; ++j)  // stretch family: full scan
                fn(j, grid.weight(j) * kernel_value(fam, mf, t, x, grid.point(j)));
            return;
        }
        const double s0 = mf.reduce(x)[0];
        const Vec3 ex = mf.embed(x);
        const bool wrapped = fam.kind == KernelKind::heat_restricted;
        auto emit = [&](size_t j) {
            double q;
            if (chord_kernel) {
                const Vec3 d3 = grid.embedded(j) - ex;
                q = pref * std::exp(-dot(d3, d3) * inv2t);
            } else if (wrapped) {
                q = wrapped_heat_kernel(P, t, grid.curve_nodes()[j] - s0);
            } else {
                double d = std::abs(grid.curve_nodes()[j] - s0);
                d = std::min(d, P - d);
                q = pref * std::exp(-d * d * inv2t);
            }
            fn(j, grid.weight(j) * q);
        };
        const double cap = (chord_kernel ? 24.0 : 10.0) * std::sqrt(t);
        if (2.0 * cap >= P) {
            for (size_t j = 0; j < n; ++j) emit(j);
            return;
        }
        const auto center = static_cast<long>(std::llround(s0 / h));
        const auto w = static_cast<long>(std::ceil(cap / h)) + 1;
        const auto ln = static_cast<long>(n);
        for (long d = -w; d <= w; ++d) {
            long j = (center + d) % ln;
            if (j < 0) j += ln;
            emit(static_cast<size_t>(j));
        }
        return;
    }
    // sphere: skip whole rings outside the angular cap, then filter nodes by
    // the cached dot product and evaluate the kernel from it
    const double r = mf.radius();
    const double cap = std::min(M_PI, (chord_kernel ? 24.0 : 10.0) * std::sqrt(t) / r);
    const double cos_cap = cap >= M_PI ? -2.0 : std::cos(cap);
    const Vec3 ux = mf.embed(x);
    const double inv_r2 = 1.0 / (r * r);
    const double pref = 1.0 / (2.0 * M_PI * t);
    const int nphi = grid.nphi();
    for (int ring = 0; ring < grid.rings(); ++ring) {
        if (std::abs(grid.ring_theta(ring) - x[0]) > cap) continue;
        const size_t base = static_cast<size_t>(ring) * nphi;
        const double w = grid.ring_node_weight(ring);
        for (int k = 0; k < nphi; ++k) {
            const size_t j = base + k;
            const Vec3 uy = grid.embedded(j);
            const double c = dot(ux, uy) * inv_r2;
            if (c < cos_cap) continue;
            double d2;
            if (chord_kernel) {
                d2 = 2.0 * r * r * (1.0 - c);
            } else {
                const double ang = std::acos(std::clamp(c, -1.0, 1.0));
                d2 = r * r * ang * ang;
            }
            fn(j, w * pref * std::exp(-d2 * inv2t));
        }
    }
}

}  // namespace detail

/// Step mass b(t,x) by quadrature (kernel prefactors included).
inline double kernel_mass(const KernelFamily& fam, const Manifold& mf, const QuadratureGrid& grid,
                          double t, PointParam x) {
    if (!grid.adequate_for(t))
        throw GridTooCoarse("kernel_mass: node spacing exceeds sqrt(t)/4");
    double sum = 0.0;
    detail::for_each_kernel_weight(fam, mf, grid, t, x, [&](size_t, double wq) { sum += wq; });
    return sum;
}

struct NormalizationReport {
    double t = 0.0;
    PointParam x{};
    double b_value = 0.0;   // quadrature mass of the normalized kernel
    double predicted = 0.0; // e^{t D(x)}
    double residual = 0.0;  // b_value - predicted
};

inline NormalizationReport normalization_b(const KernelFamily& fam, const Manifold& mf, double t,
                                           PointParam x, const QuadratureGrid& grid) {
    NormalizationReport rep;
    rep.t = t;
    rep.x = x;
    rep.b_value = kernel_mass(fam, mf, grid, t, x);
    rep.predicted = std::exp(t * density_exponent(fam.kind, mf, x, fam.ambient));
    rep.residual = rep.b_value - rep.predicted;
    return rep;
}

}  // namespace pinbm
