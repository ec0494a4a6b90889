#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pinbm/gauss_legendre.hpp"
#include "pinbm/manifold.hpp"

namespace pinbm {

/// Volume quadrature over the manifold. Curves: uniform arc-length nodes
/// with equal weights. Sphere: Gauss-Legendre in cos(theta) x uniform phi,
/// stored ring-wise (node index = ring * nphi + k).
class QuadratureGrid {
public:
    QuadratureGrid(const Manifold& mf, int resolution) : mf_(mf) {
        if (resolution < 16) throw std::invalid_argument("QuadratureGrid: resolution >= 16");
        if (mf.is_curve()) {
            const double P = mf.perimeter();
            h_ = P / resolution;
            s_.resize(resolution);
            embedded_.resize(resolution);
            for (int j = 0; j < resolution; ++j) {
                s_[j] = j * h_;
                embedded_[j] = mf.embed({s_[j], 0.0});
            }
            spacing_ = h_;
        } else {
            const double r = mf.radius();
            nphi_ = 2 * resolution;
            auto rule = gauss_legendre(resolution);
            theta_.resize(resolution);
            ring_node_w_.resize(resolution);
            ring_sin_.resize(resolution);
            ring_cos_.resize(resolution);
            for (int i = 0; i < resolution; ++i) {
                theta_[i] = std::acos(rule.nodes[resolution - 1 - i]);  // ascending theta
                ring_node_w_[i] = rule.weights[resolution - 1 - i] * r * r * (2.0 * M_PI / nphi_);
                ring_sin_[i] = std::sin(theta_[i]);
                ring_cos_[i] = std::cos(theta_[i]);
            }
            phi_cos_.resize(nphi_);
            phi_sin_.resize(nphi_);
            for (int k = 0; k < nphi_; ++k) {
                const double phi = (k + 0.5) * (2.0 * M_PI / nphi_);
                phi_cos_[k] = std::cos(phi);
                phi_sin_[k] = std::sin(phi);
            }
            double max_dth = theta_[0];
            for (size_t i = 1; i < theta_.size(); ++i)
                max_dth = std::max(max_dth, theta_[i] - theta_[i - 1]);
            max_dth = std::max(max_dth, M_PI - theta_.back());
            spacing_ = r * std::max(max_dth, M_PI / resolution);
        }
    }

    const Manifold& manifold() const { return mf_; }
    bool is_curve() const { return mf_.is_curve(); }

    size_t node_count() const {
        return is_curve() ? s_.size() : theta_.size() * static_cast<size_t>(nphi_);
    }

    /// Largest gap between neighbouring nodes; the kernel modules require
    /// spacing <= sqrt(t)/4 before quadrature against q_t.
    double max_spacing() const { return spacing_; }
    bool adequate_for(double t) const { return spacing_ <= std::sqrt(t) / 4.0; }

    double total_weight() const {
        if (is_curve()) return h_ * static_cast<double>(s_.size());
        double sum = 0.0;
        for (double w : ring_node_w_) sum += w * nphi_;
        return sum;
    }

    PointParam point(size_t i) const {
        if (is_curve()) return {s_[i], 0.0};
        const size_t ring = i / nphi_, k = i % nphi_;
        return {theta_[ring], (static_cast<double>(k) + 0.5) * (2.0 * M_PI / nphi_)};
    }

    double weight(size_t i) const { return is_curve() ? h_ : ring_node_w_[i / nphi_]; }

    Vec3 embedded(size_t i) const {
        if (is_curve()) return embedded_[i];
        const size_t ring = i / nphi_, k = i % nphi_;
        const double r = mf_.radius();
        return {r * ring_sin_[ring] * phi_cos_[k], r * ring_sin_[ring] * phi_sin_[k],
                r * ring_cos_[ring]};
    }

    // curve access
    double curve_spacing() const { return h_; }
    const std::vector<double>& curve_nodes() const { return s_; }

    // sphere ring access
    int rings() const { return static_cast<int>(theta_.size()); }
    int nphi() const { return nphi_; }
    double ring_theta(int i) const { return theta_[i]; }
    double ring_weight_total(int i) const { return ring_node_w_[i] * nphi_; }
    double ring_node_weight(int i) const { return ring_node_w_[i]; }

private:
    Manifold mf_;
    double spacing_ = 0.0;
    // curves
    double h_ = 0.0;
    std::vector<double> s_;
    std::vector<Vec3> embedded_;
    // sphere
    int nphi_ = 0;
    std::vector<double> theta_, ring_node_w_, ring_sin_, ring_cos_, phi_cos_, phi_sin_;
};

inline QuadratureGrid build_quadrature(const Manifold& mf, int resolution) {
    return QuadratureGrid(mf, resolution);
}

/// Smallest resolution whose node spacing satisfies the sqrt(t)/4 rule.
inline int adequate_resolution(const Manifold& mf, double t) {
    const double target = std::sqrt(t) / 4.0;
    if (mf.is_curve()) {
        return std::max(16, static_cast<int>(std::ceil(mf.perimeter() / target)));
    }
    return std::max(16, static_cast<int>(std::ceil(M_PI * mf.radius() / target)) + 2);
}

}  // namespace pinbm
