#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "pinbm/gauss_legendre.hpp"

namespace pinbm {

/// Chart coordinates. Curves use {arc length s, 0}; the sphere uses
/// {colatitude theta in [0,pi], longitude phi in [0,2pi)}.
using PointParam = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

/// Pointwise curvature scalars of the embedded manifold: intrinsic scalar
/// curvature, squared tension |tau|^2 of the embedding, and the ambient
/// partial traces (zero for Euclidean ambient space).
struct CurvatureData {
    double scal_l = 0.0;
    double tau_sq = 0.0;
    double rbar = 0.0;
    double ricbar = 0.0;
    double scal_m = 0.0;
};

enum class ManifoldKind { circle, ellipse, sphere2 };

namespace detail {

/// Arc-length <-> angle table for the ellipse (a cos u, b sin u). 4096
/// panels, per-panel Gauss-Legendre for the cumulative arc length, cubic
/// Hermite inversion with exact slopes du/ds = 1/|gamma'(u)|.
class EllipseTable {
public:
    EllipseTable(double a, double b) : a_(a), b_(b) {
        const int panels = 4096;
        auto rule = gauss_legendre(16);
        u_.resize(panels + 1);
        s_.resize(panels + 1);
        u_[0] = 0.0;
        s_[0] = 0.0;
        const double h = 2.0 * M_PI / panels;
        for (int k = 0; k < panels; ++k) {
            const double u0 = k * h;
            double seg = 0.0;
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = u0 + 0.5 * h * (rule.nodes[i] + 1.0);
                seg += rule.weights[i] * speed(u);
            }
            seg *= 0.5 * h;
            u_[k + 1] = (k + 1) * h;
            s_[k + 1] = s_[k] + seg;
        }
        perimeter_ = s_.back();
    }

    double speed(double u) const {
        const double su = std::sin(u), cu = std::cos(u);
        return std::sqrt(a_ * a_ * su * su + b_ * b_ * cu * cu);
    }

    double perimeter() const { return perimeter_; }

    double u_from_s(double s) const {
        s = std::fmod(s, perimeter_);
        if (s < 0.0) s += perimeter_;
        auto it = std::upper_bound(s_.begin(), s_.end(), s);
        size_t k = std::min(static_cast<size_t>(it - s_.begin()), s_.size() - 1) - 1;
        const double s0 = s_[k], s1 = s_[k + 1];
        const double hseg = s1 - s0;
        const double x = (s - s0) / hseg;
        const double m0 = hseg / speed(u_[k]);      // du/ds * hseg at the left node
        const double m1 = hseg / speed(u_[k + 1]);  // and at the right node
        const double x2 = x * x, x3 = x2 * x;
        return (2 * x3 - 3 * x2 + 1) * u_[k] + (x3 - 2 * x2 + x) * m0 +
               (-2 * x3 + 3 * x2) * u_[k + 1] + (x3 - x2) * m1;
    }

private:
    double a_, b_;
    double perimeter_ = 0.0;
    std::vector<double> u_, s_;
};

}  // namespace detail

/// A concrete closed manifold. Immutable after construction; all queries are
/// pure and thread-safe.
class Manifold {
public:
    static Manifold circle(double radius) {
        require_positive(radius);
        Manifold m(ManifoldKind::circle, radius, radius);
        m.volume_ = 2.0 * M_PI * radius;
        return m;
    }

    static Manifold ellipse(double semi_axis_a, double semi_axis_b) {
        require_positive(semi_axis_a);
        require_positive(semi_axis_b);
        Manifold m(ManifoldKind::ellipse, semi_axis_a, semi_axis_b);
        m.table_ = std::make_shared<detail::EllipseTable>(semi_axis_a, semi_axis_b);
        m.volume_ = m.table_->perimeter();
        return m;
    }

    static Manifold sphere(double radius) {
        require_positive(radius);
        Manifold m(ManifoldKind::sphere2, radius, radius);
        m.volume_ = 4.0 * M_PI * radius * radius;
        return m;
    }

    ManifoldKind kind() const { return kind_; }
    bool is_curve() const { return kind_ != ManifoldKind::sphere2; }
    int intrinsic_dim() const { return is_curve() ? 1 : 2; }
    int ambient_dim() const { return is_curve() ? 2 : 3; }
    double total_volume() const { return volume_; }
    double radius() const { return p1_; }
    double semi_axis_a() const { return p1_; }
    double semi_axis_b() const { return p2_; }

    double perimeter() const {
        if (!is_curve()) throw std::logic_error("perimeter: not a curve");
        return volume_;
    }

    PointParam reduce(PointParam x) const {
        if (is_curve()) {
            double s = std::fmod(x[0], perimeter());
            if (s < 0.0) s += perimeter();
            return {s, 0.0};
        }
        double phi = std::fmod(x[1], 2.0 * M_PI);
        if (phi < 0.0) phi += 2.0 * M_PI;
        return {std::clamp(x[0], 0.0, M_PI), phi};
    }

    Vec3 embed(PointParam x) const {
        switch (kind_) {
            case ManifoldKind::circle: {
                const double u = x[0] / p1_;
                return {p1_ * std::cos(u), p1_ * std::sin(u), 0.0};
            }
            case ManifoldKind::ellipse: {
                const double u = table_->u_from_s(x[0]);
                return {p1_ * std::cos(u), p2_ * std::sin(u), 0.0};
            }
            case ManifoldKind::sphere2: {
                const double st = std::sin(x[0]), ct = std::cos(x[0]);
                return {p1_ * st * std::cos(x[1]), p1_ * st * std::sin(x[1]), p1_ * ct};
            }
        }
        return {};
    }

    double geodesic_distance(PointParam x, PointParam y) const {
        if (is_curve()) {
            double d = std::abs(reduce(x)[0] - reduce(y)[0]);
            return std::min(d, perimeter() - d);
        }
        const Vec3 u = embed(x), v = embed(y);
        const double c = std::clamp(dot(u, v) / (p1_ * p1_), -1.0, 1.0);
        return p1_ * std::acos(c);
    }

    double ambient_distance(PointParam x, PointParam y) const { return norm(embed(x) - embed(y)); }

    CurvatureData curvature_at(PointParam x) const {
        CurvatureData c;
        switch (kind_) {
            case ManifoldKind::circle:
                c.tau_sq = 1.0 / (p1_ * p1_);
                break;
            case ManifoldKind::ellipse: {
                const double u = table_->u_from_s(x[0]);
                const double su = std::sin(u), cu = std::cos(u);
                const double q = p1_ * p1_ * su * su + p2_ * p2_ * cu * cu;
                const double kappa = p1_ * p2_ / (q * std::sqrt(q));
                c.tau_sq = kappa * kappa;
                break;
            }
            case ManifoldKind::sphere2:
                c.scal_l = 2.0 / (p1_ * p1_);
                c.tau_sq = 4.0 / (p1_ * p1_);
                break;
        }
        return c;
    }

    /// (d_M^2 - d_L^2) / d_L^4 for the geodesic endpoint at arc distance s
    /// from x. For curves `direction` is the sign of the arc step; for the
    /// sphere it is the tangent azimuth in the (e_theta, e_phi) frame. The
    /// guard keeps the endpoint inside the unique-minimizing-geodesic range.
    double chord_arc_defect(PointParam x, double direction, double s) const {
        if (is_curve()) {
            if (!(s > 0.0 && s < perimeter() / 4.0))
                throw std::domain_error("chord_arc_defect: s outside (0, perimeter/4)");
            const double step = direction < 0.0 ? -s : s;
            const PointParam y = reduce({x[0] + step, 0.0});
            const double dm = ambient_distance(x, y);
            return (dm * dm - s * s) / (s * s * s * s);
        }
        if (!(s > 0.0 && s < M_PI * p1_ / 2.0))
            throw std::domain_error("chord_arc_defect: s outside (0, pi r / 2)");
        const PointParam y = geodesic_step(x, direction, s);
        const double dm = ambient_distance(x, y);
        return (dm * dm - s * s) / (s * s * s * s);
    }

    /// Endpoint of the unit-speed great circle from x with tangent azimuth
    /// psi after arc length s (sphere only).
    PointParam geodesic_step(PointParam x, double psi, double s) const {
        if (is_curve()) return reduce({x[0] + (psi < 0.0 ? -s : s), 0.0});
        const double st = std::sin(x[0]), ct = std::cos(x[0]);
        const double cp = std::cos(x[1]), sp = std::sin(x[1]);
        const Vec3 u = {st * cp, st * sp, ct};
        const Vec3 e_th = {ct * cp, ct * sp, -st};
        const Vec3 e_ph = {-sp, cp, 0.0};
        const double ca = std::cos(s / p1_), sa = std::sin(s / p1_);
        const double dx = std::cos(psi), dy = std::sin(psi);
        Vec3 v;
        for (int i = 0; i < 3; ++i) v[i] = ca * u[i] + sa * (dx * e_th[i] + dy * e_ph[i]);
        const double theta = std::acos(std::clamp(v[2], -1.0, 1.0));
        double phi = std::atan2(v[1], v[0]);
        if (phi < 0.0) phi += 2.0 * M_PI;
        return {theta, phi};
    }

    /// Angle parameter of the ellipse at arc length s (tests and tooling).
    double ellipse_angle_from_arc(double s) const {
        if (kind_ != ManifoldKind::ellipse) throw std::logic_error("not an ellipse");
        return table_->u_from_s(s);
    }

private:
    Manifold(ManifoldKind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}

    static void require_positive(double v) {
        if (!(v > 0.0)) throw std::invalid_argument("Manifold: parameters must be > 0");
    }

    ManifoldKind kind_;
    double p1_, p2_;
    double volume_ = 0.0;
    std::shared_ptr<const detail::EllipseTable> table_;
};

}  // namespace pinbm
