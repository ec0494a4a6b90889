#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pinbm/fit.hpp"
#include "pinbm/kernels.hpp"
#include "pinbm/partition.hpp"
#include "pinbm/test_function.hpp"

namespace pinbm {

namespace detail {

template <typename Fn>
void parallel_for(size_t n, int n_threads, Fn&& fn) {
    if (n_threads <= 1 || n < 64) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    const size_t chunk = (n + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
        const size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace detail

/// S(t) applied to a grid function: out_i = sum_j w_j q_t(x_i, y_j) v_j,
/// normalization mode folded in (markov_t divides by the row mass,
/// rescaled_b multiplies by e^{-t D(x_i)}). Each output node's quadrature
/// sum runs serially in index order, so the result does not depend on the
/// thread count.
inline std::vector<double> apply_to_values(const KernelFamily& fam, const Manifold& mf, double t,
                                           std::span<const double> values,
                                           const QuadratureGrid& grid, int n_threads = 1) {
    if (fam.normalization == Normalization::global_sigma)
        throw std::invalid_argument("apply_to_values: global_sigma is a path-measure normalization");
    validate_family(fam, mf, /*allow_sphere_ambient=*/true);
    if (!grid.adequate_for(t)) throw GridTooCoarse("apply_to_values: grid too coarse for this t");
    if (values.size() != grid.node_count())
        throw std::invalid_argument("apply_to_values: value vector does not match grid");

    std::vector<double> out(grid.node_count());
    if (arc_translation_invariant(fam, mf)) {
        // circulant case: one kernel row, applied as a (windowed) convolution
        const auto n = static_cast<long>(grid.node_count());
        const double h = grid.curve_spacing();
        const double P = mf.perimeter();
        const bool chord = fam.kind != KernelKind::intrinsic_gauss;
        const double cap = (chord ? 24.0 : 10.0) * std::sqrt(t);
        long lo, hi;  // inclusive offset range, each node at most once
        if (2.0 * cap >= P) {
            lo = -(n / 2);
            hi = lo + n - 1;
        } else {
            const long w = static_cast<long>(std::ceil(cap / h)) + 1;
            lo = -w;
            hi = w;
        }
        std::vector<double> row(static_cast<size_t>(hi - lo + 1));
        double mass = 0.0;
        for (long d = lo; d <= hi; ++d) {
            const double off = static_cast<double>(d) * h;
            row[d - lo] = h * kernel_value(fam, mf, t, {0.0, 0.0}, {off, 0.0});
            mass += row[d - lo];
        }
        detail::parallel_for(grid.node_count(), n_threads, [&](size_t i) {
            double acc = 0.0;
            const long first = static_cast<long>(i) + lo;
            if (first >= 0 && static_cast<long>(i) + hi < n) {
                const double* v = values.data() + first;
                for (size_t d = 0; d < row.size(); ++d) acc += row[d] * v[d];
            } else {
                for (long d = lo; d <= hi; ++d) {
                    long j = (static_cast<long>(i) + d) % n;
                    if (j < 0) j += n;
                    acc += row[d - lo] * values[static_cast<size_t>(j)];
                }
            }
            switch (fam.normalization) {
                case Normalization::raw_s:
                    out[i] = acc;
                    break;
                case Normalization::markov_t:
                    out[i] = acc / mass;
                    break;
                case Normalization::rescaled_b:
                    out[i] = acc * std::exp(-t * density_exponent(fam.kind, mf, grid.point(i),
                                                                  fam.ambient));
                    break;
                case Normalization::global_sigma:
                    break;
            }
        });
        return out;
    }
    detail::parallel_for(grid.node_count(), n_threads, [&](size_t i) {
        const PointParam x = grid.point(i);
        double acc = 0.0, mass = 0.0;
        detail::for_each_kernel_weight(fam, mf, grid, t, x, [&](size_t j, double wq) {
            acc += wq * values[j];
            mass += wq;
        });
        switch (fam.normalization) {
            case Normalization::raw_s:
                out[i] = acc;
                break;
            case Normalization::markov_t:
                out[i] = acc / mass;
                break;
            case Normalization::rescaled_b:
                out[i] = acc * std::exp(-t * density_exponent(fam.kind, mf, x, fam.ambient));
                break;
            case Normalization::global_sigma:
                break;  // rejected above
        }
    });
    return out;
}

inline std::vector<double> evaluate_on_grid(const TestFunction& f, const Manifold& mf,
                                            const QuadratureGrid& grid) {
    std::vector<double> v(grid.node_count());
    for (size_t i = 0; i < grid.node_count(); ++i) v[i] = f.value(mf, grid.point(i));
    return v;
}

inline std::vector<double> apply_operator(const KernelFamily& fam, const Manifold& mf, double t,
                                          const TestFunction& f, const QuadratureGrid& grid,
                                          int n_threads = 1) {
    return apply_to_values(fam, mf, t, evaluate_on_grid(f, mf, grid), grid, n_threads);
}

/// Left-to-right product S(dt_1) ... S(dt_r) f over the partition increments.
inline std::vector<double> chernoff_product(const KernelFamily& fam, const Manifold& mf,
                                            const Partition& partition, const TestFunction& f,
                                            const QuadratureGrid& grid, int n_threads = 1) {
    std::vector<double> state = evaluate_on_grid(f, mf, grid);
    for (double dt : partition.increments())
        state = apply_to_values(fam, mf, dt, state, grid, n_threads);
    return state;
}

struct ChernoffReport {
    std::vector<double> t_grid;
    std::vector<double> residual_sup;
    double fitted_order = 0.0;
};

/// Sup-node residual of (S(t)f - f)/t against the generator D f + Lap f / 2,
/// with D the family's density exponent for raw_s and zero for the
/// normalized modes, plus the fitted order in t (endpoints dropped).
inline ChernoffReport chernoff_residual(const KernelFamily& fam, const Manifold& mf,
                                        const TestFunction& f, std::vector<double> t_grid,
                                        const QuadratureGrid& grid, int n_threads = 1) {
    if (!f.has_laplacian())
        throw std::invalid_argument("chernoff_residual: f needs a closed-form Laplacian");
    ChernoffReport rep;
    rep.t_grid = std::move(t_grid);
    const std::vector<double> fv = evaluate_on_grid(f, mf, grid);
    std::vector<double> target(grid.node_count());
    for (size_t i = 0; i < grid.node_count(); ++i) {
        const PointParam x = grid.point(i);
        const double d0 = fam.normalization == Normalization::raw_s
                              ? density_exponent(fam.kind, mf, x, fam.ambient)
                              : 0.0;
        target[i] = d0 * fv[i] + 0.5 * f.laplacian(mf, x);
    }
    for (double t : rep.t_grid) {
        const std::vector<double> sf = apply_to_values(fam, mf, t, fv, grid, n_threads);
        double sup = 0.0;
        for (size_t i = 0; i < sf.size(); ++i)
            sup = std::max(sup, std::abs((sf[i] - fv[i]) / t - target[i]));
        rep.residual_sup.push_back(sup);
    }
    rep.fitted_order = loglog_fit(rep.t_grid, rep.residual_sup, /*drop_ends=*/true).slope;
    return rep;
}

}  // namespace pinbm
