#pragma once

#include <cmath>

#include "pinbm/families.hpp"
#include "pinbm/manifold.hpp"

namespace pinbm {

/// Curvature data of the embedding used by a kernel family. For
/// heat_restricted with a non-Euclidean ambient the intrinsic curve data is
/// replaced by that of the identity / small-circle embedding.
inline CurvatureData family_curvature(KernelKind kind, const Manifold& mf, PointParam x,
                                      const AmbientSpec& ambient = AmbientSpec::euclidean()) {
    if (kind == KernelKind::heat_restricted && ambient.type == AmbientSpec::Type::self_circle) {
        return CurvatureData{};  // identity embedding: everything vanishes
    }
    if (kind == KernelKind::heat_restricted && ambient.type == AmbientSpec::Type::sphere) {
        const double R = ambient.sphere_radius;
        const double cot = std::cos(ambient.colatitude) / std::sin(ambient.colatitude);
        CurvatureData c;
        c.tau_sq = cot * cot / (R * R);  // geodesic curvature^2 of the small circle
        c.ricbar = 1.0 / (R * R);
        c.scal_m = 2.0 / (R * R);
        return c;
    }
    return mf.curvature_at(x);
}

/// The function D(x) of the family: the short-time exponent of the one-step
/// mass, b(t,x) = e^{t D(x)} + O(t^{3/2}), which is also the exponent of the
/// limiting Radon-Nikodym density exp(int_0^1 D(w(s)) ds) of the globally
/// normalized pinning measure with respect to Brownian motion on L. The
/// proper (Chernoff-equivalent) rescaled family is e^{-t D(x)} q_t. Signs
/// were frozen against quadrature and an exact transfer-matrix check.
inline double density_exponent(KernelKind kind, const Manifold& mf, PointParam x,
                               const AmbientSpec& ambient = AmbientSpec::euclidean()) {
    const CurvatureData c = family_curvature(kind, mf, x, ambient);
    switch (kind) {
        case KernelKind::intrinsic_gauss:
            return -c.scal_l / 6.0;
        case KernelKind::ambient_gauss:
            return -c.scal_l / 4.0 + c.tau_sq / 8.0 + c.rbar / 12.0;
        case KernelKind::heat_restricted:
            return -c.scal_l / 4.0 + c.tau_sq / 8.0 + (c.rbar + c.ricbar + c.scal_m) / 12.0;
    }
    return 0.0;
}

/// d_function bound to a fixed family (spec's DensityExponent view).
struct DensityExponent {
    KernelKind kind;
    AmbientSpec ambient;
    double operator()(const Manifold& mf, PointParam x) const {
        return density_exponent(kind, mf, x, ambient);
    }
};

}  // namespace pinbm
