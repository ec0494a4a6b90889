#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pinbm/alias_table.hpp"
#include "pinbm/fit.hpp"
#include "pinbm/density_exponent.hpp"
#include "pinbm/kernels.hpp"
#include "pinbm/partition.hpp"
#include "pinbm/rng.hpp"

namespace pinbm {

enum class Interpolation { none, l_geodesic, m_geodesic, euclidean_bridge };

inline const char* to_string(Interpolation i) {
    switch (i) {
        case Interpolation::none: return "none";
        case Interpolation::l_geodesic: return "l_geodesic";
        case Interpolation::m_geodesic: return "m_geodesic";
        case Interpolation::euclidean_bridge: return "euclidean_bridge";
    }
    return "?";
}

/// Discrete skeleton on a partition with its accumulated log-weight and an
/// optional refined interpolation in the ambient space. Segment endpoints of
/// fine_path coincide bit-exactly with the embedded skeleton points.
struct WeightedPath {
    std::vector<double> times;
    std::vector<PointParam> skeleton;
    double log_weight = 0.0;
    Interpolation interpolation = Interpolation::none;
    int refinement_depth = 0;
    std::vector<double> fine_times;
    std::vector<Vec3> fine_path;
};

struct SamplerConfig {
    std::uint64_t seed = 1;
    std::int64_t paths = 1;
    int resolution = 256;
    Partition partition = Partition::uniform(64);
    KernelFamily family;
    Interpolation interpolation = Interpolation::none;
    int refinement_depth = 6;
};

namespace detail {

inline std::uint64_t time_key(double t) {
    std::uint64_t k;
    static_assert(sizeof(k) == sizeof(t));
    std::memcpy(&k, &t, sizeof(k));
    return k;
}

}  // namespace detail

/// Grid-categorical transition sampling for one kernel family on one
/// manifold. Homogeneous cases (arc-distance kernels on curves, everything
/// on the circle and the sphere) share one table per time step; the
/// inhomogeneous ellipse rows are built per grid node. Tables are built
/// deterministically, so concurrent builders agree.
class TransitionSampler {
public:
    TransitionSampler(KernelFamily fam, Manifold mf, QuadratureGrid grid)
        : fam_(fam), mf_(std::move(mf)), grid_(std::move(grid)) {
        validate_family(fam_, mf_, /*allow_sphere_ambient=*/true);
    }

    struct StepResult {
        PointParam y;
        double log_mass;
    };

    const QuadratureGrid& grid() const { return grid_; }
    const Manifold& manifold() const { return mf_; }
    const KernelFamily& family() const { return fam_; }

    /// One transition of length t from x: y is drawn with probabilities
    /// proportional to w_j q_t(x, y_j); log_mass is log sum_j w_j q_t(x,y_j).
    StepResult step(double t, PointParam x, CounterRng& rng) const {
        if (!grid_.adequate_for(t)) throw GridTooCoarse("step: grid too coarse for this t");
        auto tables = prepared(t);
        if (!grid_.is_curve()) {
            const auto ring = tables->homo->sample(rng);
            const auto k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(grid_.nphi()));
            const double psi = (k + 0.5) * (2.0 * M_PI / grid_.nphi());
            const double arc = mf_.radius() * grid_.ring_theta(static_cast<int>(ring));
            return {mf_.geodesic_step(x, psi, arc), tables->homo_log_mass};
        }
        if (tables->homogeneous()) {
            const auto j = tables->homo->sample(rng);
            return {mf_.reduce({x[0] + static_cast<double>(j) * grid_.curve_spacing(), 0.0}),
                    tables->homo_log_mass};
        }
        // inhomogeneous curve: rows live on the fixed grid
        const double h = grid_.curve_spacing();
        const double s0 = mf_.reduce(x)[0];
        const auto near = static_cast<size_t>(std::llround(s0 / h)) % grid_.node_count();
        if (std::abs(s0 - static_cast<double>(near) * h) <= 1e-9 * mf_.perimeter()) {
            const auto& row = tables->rows[near];
            const auto j = row.alias->sample(rng);
            return {grid_.point(j), row.log_mass};
        }
        auto row = build_curve_row(t, x);  // off-grid start point
        const auto j = row.alias->sample(rng);
        return {grid_.point(j), row.log_mass};
    }

    /// Builds the tables for this increment (idempotent, thread-safe).
    void prepare(double t) const { (void)prepared(t); }

private:
    struct Row {
        std::shared_ptr<const AliasTable> alias;
        double log_mass = 0.0;
    };
    struct Tables {
        std::shared_ptr<const AliasTable> homo;
        double homo_log_mass = 0.0;
        std::vector<Row> rows;
        bool homogeneous() const { return homo != nullptr; }
    };

    bool arc_homogeneous() const {
        if (!grid_.is_curve()) return true;
        if (mf_.kind() == ManifoldKind::circle) return true;
        // intrinsic kernels and the small-circle sphere restriction depend
        // on the arc difference only
        return fam_.kind == KernelKind::intrinsic_gauss ||
               (fam_.kind == KernelKind::heat_restricted &&
                fam_.ambient.type == AmbientSpec::Type::sphere);
    }

    Row build_curve_row(double t, PointParam x) const {
        std::vector<double> w(grid_.node_count());
        double mass = 0.0;
        detail::for_each_kernel_weight(fam_, mf_, grid_, t, x, [&](size_t j, double wq) {
            w[j] = wq;
            mass += wq;
        });
        Row row;
        row.alias = std::make_shared<AliasTable>(w);
        row.log_mass = std::log(mass);
        return row;
    }

    std::shared_ptr<const Tables> prepared(double t) const {
        const std::uint64_t key = detail::time_key(t);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        auto tables = std::make_shared<Tables>();
        if (!grid_.is_curve()) {
            std::vector<double> w(grid_.rings());
            double mass = 0.0;
            for (int i = 0; i < grid_.rings(); ++i) {
                const double q =
                    kernel_value(fam_, mf_, t, {0.0, 0.0}, {grid_.ring_theta(i), 0.0});
                w[i] = grid_.ring_weight_total(i) * q;
                mass += w[i];
            }
            tables->homo = std::make_shared<AliasTable>(w);
            tables->homo_log_mass = std::log(mass);
        } else if (arc_homogeneous()) {
            const double h = grid_.curve_spacing();
            std::vector<double> w(grid_.node_count());
            double mass = 0.0;
            for (size_t j = 0; j < grid_.node_count(); ++j) {
                const double q = kernel_value(fam_, mf_, t, {0.0, 0.0},
                                              {static_cast<double>(j) * h, 0.0});
                w[j] = h * q;
                mass += w[j];
            }
            tables->homo = std::make_shared<AliasTable>(w);
            tables->homo_log_mass = std::log(mass);
        } else {
            tables->rows.reserve(grid_.node_count());
            for (size_t i = 0; i < grid_.node_count(); ++i)
                tables->rows.push_back(build_curve_row(t, grid_.point(i)));
        }
        std::lock_guard<std::mutex> lock(mutex_);
        auto [it, inserted] = cache_.emplace(key, std::move(tables));
        return it->second;
    }

    KernelFamily fam_;
    Manifold mf_;
    QuadratureGrid grid_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::shared_ptr<const Tables>> cache_;
};

/// One transition sample (standalone form of TransitionSampler::step).
inline TransitionSampler::StepResult step_sample(const KernelFamily& fam, const Manifold& mf,
                                                 double t, PointParam x,
                                                 const QuadratureGrid& grid, CounterRng& rng) {
    TransitionSampler sampler(fam, mf, grid);
    return sampler.step(t, x, rng);
}

/// Chains step_sample over the partition increments. The log-weight is
/// sum log_mass for raw_s/global_sigma, zero for markov_t, and
/// sum (log_mass - dt * D(y_prev)) for rescaled_b (the step mass of the
/// proper e^{-tD} q_t kernel), so raw_s minus rescaled_b telescopes to the
/// discrete Feynman-Kac exponent sum_k dt_k D(y_{k-1}).
inline WeightedPath sample_skeleton(const TransitionSampler& sampler, const Partition& partition,
                                    PointParam x, CounterRng& rng) {
    const Manifold& mf = sampler.manifold();
    const KernelFamily& fam = sampler.family();
    WeightedPath path;
    path.times = partition.times;
    path.skeleton.reserve(partition.times.size());
    path.skeleton.push_back(mf.reduce(x));
    for (size_t k = 0; k + 1 < partition.times.size(); ++k) {
        const double dt = partition.times[k + 1] - partition.times[k];
        const PointParam prev = path.skeleton.back();
        const auto step = sampler.step(dt, prev, rng);
        path.skeleton.push_back(step.y);
        switch (fam.normalization) {
            case Normalization::raw_s:
            case Normalization::global_sigma:
                path.log_weight += step.log_mass;
                break;
            case Normalization::markov_t:
                break;
            case Normalization::rescaled_b:
                path.log_weight +=
                    step.log_mass - dt * density_exponent(fam.kind, mf, prev, fam.ambient);
                break;
        }
    }
    return path;
}

namespace detail {

inline Vec3 lerp(const Vec3& a, const Vec3& b, double u) {
    return {a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]), a[2] + u * (b[2] - a[2])};
}

/// Point at fraction u of the shortest curve arc from a to b. The
/// half-perimeter tie goes to the negative arc direction (the smaller chart
/// representation of the initial tangent).
inline PointParam curve_geodesic_point(const Manifold& mf, PointParam a, PointParam b, double u) {
    const double P = mf.perimeter();
    double delta = mf.reduce(b)[0] - mf.reduce(a)[0];
    if (delta > P / 2) delta -= P;
    if (delta <= -P / 2) delta += P;
    if (std::abs(std::abs(delta) - P / 2) < 1e-15 * P) delta = -P / 2;
    return mf.reduce({a[0] + u * delta, 0.0});
}

/// Great-circle point at fraction u from a to b; the antipodal tie picks the
/// geodesic leaving a with tangent -e_theta.
inline PointParam sphere_geodesic_point(const Manifold& mf, PointParam a, PointParam b, double u) {
    const double r = mf.radius();
    const Vec3 ua = mf.embed(a), ub = mf.embed(b);
    const double c = std::clamp(dot(ua, ub) / (r * r), -1.0, 1.0);
    const double theta = std::acos(c);
    if (theta < 1e-12) return a;
    if (theta > M_PI - 1e-9) return mf.geodesic_step(a, M_PI, u * r * theta);  // psi=pi: -e_theta
    const double s0 = std::sin((1.0 - u) * theta) / std::sin(theta);
    const double s1 = std::sin(u * theta) / std::sin(theta);
    const Vec3 v = {s0 * ua[0] + s1 * ub[0], s0 * ua[1] + s1 * ub[1], s0 * ua[2] + s1 * ub[2]};
    const double th = std::acos(std::clamp(v[2] / r, -1.0, 1.0));
    double ph = std::atan2(v[1], v[0]);
    if (ph < 0) ph += 2 * M_PI;
    return {th, ph};
}

/// Fills interior dyadic points of a Brownian bridge between fixed entries
/// lo and hi of (times, points); recursion order is fixed for determinism.
inline void bridge_fill(std::vector<Vec3>& pts, const std::vector<double>& times, size_t lo,
                        size_t hi, int ambient_dim, CounterRng& rng) {
    if (hi - lo < 2) return;
    const size_t mid = (lo + hi) / 2;
    const double tau0 = times[lo], tau1 = times[hi], tm = times[mid];
    // bridge marginal at tm between (tau0, p0) and (tau1, p1)
    const double w = (tm - tau0) / (tau1 - tau0);
    const double sd = std::sqrt((tau1 - tm) * (tm - tau0) / (tau1 - tau0));
    Vec3 p = lerp(pts[lo], pts[hi], w);
    for (int d = 0; d < ambient_dim; ++d) p[d] += sd * rng.normal();
    pts[mid] = p;
    bridge_fill(pts, times, lo, mid, ambient_dim, rng);
    bridge_fill(pts, times, mid, hi, ambient_dim, rng);
}

}  // namespace detail

/// Attaches a refined continuous interpolation (2^depth sub-intervals per
/// partition segment) to a sampled skeleton.
inline WeightedPath interpolate(const Manifold& mf, WeightedPath path, Interpolation mode,
                                int refinement_depth, CounterRng& rng) {
    if (mode == Interpolation::none) {
        path.interpolation = mode;
        path.fine_times.clear();
        path.fine_path.clear();
        return path;
    }
    if (path.skeleton.size() < 2) throw std::invalid_argument("interpolate: skeleton missing");
    if (refinement_depth < 1 || refinement_depth > 16)
        throw std::invalid_argument("interpolate: refinement_depth in [1,16]");
    const size_t segs = path.skeleton.size() - 1;
    const size_t per = size_t{1} << refinement_depth;
    const size_t n_fine = segs * per + 1;
    path.interpolation = mode;
    path.refinement_depth = refinement_depth;
    path.fine_times.assign(n_fine, 0.0);
    path.fine_path.assign(n_fine, Vec3{});

    for (size_t k = 0; k < segs; ++k) {
        const double t0 = path.times[k], t1 = path.times[k + 1];
        for (size_t j = 0; j <= per; ++j)
            path.fine_times[k * per + j] = t0 + (t1 - t0) * static_cast<double>(j) / per;
        path.fine_times[k * per + per] = t1;  // exact partition times
        const Vec3 A = mf.embed(path.skeleton[k]);
        const Vec3 B = mf.embed(path.skeleton[k + 1]);
        path.fine_path[k * per] = A;
        path.fine_path[k * per + per] = B;
        switch (mode) {
            case Interpolation::l_geodesic:
                for (size_t j = 1; j < per; ++j) {
                    const double u = static_cast<double>(j) / per;
                    const PointParam p =
                        mf.is_curve()
                            ? detail::curve_geodesic_point(mf, path.skeleton[k], path.skeleton[k + 1], u)
                            : detail::sphere_geodesic_point(mf, path.skeleton[k], path.skeleton[k + 1], u);
                    path.fine_path[k * per + j] = mf.embed(p);
                }
                break;
            case Interpolation::m_geodesic:
                for (size_t j = 1; j < per; ++j)
                    path.fine_path[k * per + j] = detail::lerp(A, B, static_cast<double>(j) / per);
                break;
            case Interpolation::euclidean_bridge:
                detail::bridge_fill(path.fine_path, path.fine_times, k * per, k * per + per,
                                    mf.ambient_dim(), rng);
                break;
            case Interpolation::none:
                break;
        }
    }
    return path;
}

/// Samples a batch of paths with one RNG stream per path index; results are
/// identical for any thread count.
inline std::vector<WeightedPath> sample_batch(const TransitionSampler& sampler,
                                              const Partition& partition, PointParam x,
                                              std::int64_t n_paths, std::uint64_t seed,
                                              Interpolation mode = Interpolation::none,
                                              int refinement_depth = 6, int n_threads = 1) {
    for (double dt : partition.increments()) sampler.prepare(dt);
    std::vector<WeightedPath> out(static_cast<size_t>(n_paths));
    const Manifold& mf = sampler.manifold();
    auto work = [&](size_t i) {
        CounterRng rng = CounterRng::stream(seed, i);
        out[i] = sample_skeleton(sampler, partition, x, rng);
        if (mode != Interpolation::none) {
            CounterRng irng = rng.fork(0xB71D6E);
            out[i] = interpolate(mf, std::move(out[i]), mode, refinement_depth, irng);
        }
    };
    if (n_threads <= 1) {
        for (size_t i = 0; i < out.size(); ++i) work(i);
    } else {
        std::vector<std::thread> workers;
        const size_t chunk = (out.size() + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            const size_t lo = w * chunk, hi = std::min(out.size(), lo + chunk);
            if (lo >= hi) break;
            workers.emplace_back([lo, hi, &work] {
                for (size_t i = lo; i < hi; ++i) work(i);
            });
        }
        for (auto& th : workers) th.join();
    }
    return out;
}

inline std::vector<WeightedPath> sample_batch(const SamplerConfig& cfg, const Manifold& mf,
                                              PointParam x, int n_threads = 1) {
    const QuadratureGrid grid(mf, cfg.resolution);
    if (!grid.adequate_for(cfg.partition.min_increment()))
        throw GridTooCoarse("sample_batch: resolution inadequate for the smallest increment");
    TransitionSampler sampler(cfg.family, mf, grid);
    return sample_batch(sampler, cfg.partition, x, cfg.paths, cfg.seed, cfg.interpolation,
                        cfg.refinement_depth, n_threads);
}

struct BridgeStat {
    std::vector<double> alphas;
    std::vector<double> fractions;  // per alpha: fraction of segments with max deviation >= alpha
    double chi_hat = 0.0;           // fitted decay rate of log(fraction/dt) against alpha^2/dt
    double mean_dt = 0.0;
    std::int64_t segments = 0;
};

/// Fraction of bridge segments whose maximal deviation from the time-aligned
/// chord exceeds each alpha, with the exponential-decay fit.
inline BridgeStat bridge_excursion_stat(const std::vector<WeightedPath>& paths,
                                        std::vector<double> alphas) {
    if (alphas.empty()) throw std::invalid_argument("bridge_excursion_stat: no alphas");
    BridgeStat stat;
    stat.alphas = std::move(alphas);
    std::vector<std::int64_t> exceed(stat.alphas.size(), 0);
    double dt_sum = 0.0;
    for (const auto& path : paths) {
        if (path.interpolation != Interpolation::euclidean_bridge)
            throw std::invalid_argument("bridge_excursion_stat: needs euclidean_bridge paths");
        const size_t per = size_t{1} << path.refinement_depth;
        const size_t segs = path.skeleton.size() - 1;
        for (size_t k = 0; k < segs; ++k) {
            const size_t lo = k * per, hi = lo + per;
            const Vec3& A = path.fine_path[lo];
            const Vec3& B = path.fine_path[hi];
            double dev = 0.0;
            for (size_t j = 1; j < per; ++j) {
                const double u = static_cast<double>(j) / per;
                const Vec3 d = path.fine_path[lo + j] - detail::lerp(A, B, u);
                dev = std::max(dev, norm(d));
            }
            for (size_t a = 0; a < stat.alphas.size(); ++a)
                if (dev >= stat.alphas[a]) ++exceed[a];
            dt_sum += path.times[k + 1] - path.times[k];
            ++stat.segments;
        }
    }
    if (stat.segments == 0) throw std::invalid_argument("bridge_excursion_stat: no segments");
    stat.mean_dt = dt_sum / static_cast<double>(stat.segments);
    stat.fractions.resize(stat.alphas.size());
    for (size_t a = 0; a < stat.alphas.size(); ++a)
        stat.fractions[a] = static_cast<double>(exceed[a]) / static_cast<double>(stat.segments);

    std::vector<double> xs, ys;
    for (size_t a = 0; a < stat.alphas.size(); ++a) {
        if (stat.fractions[a] > 0.0 && stat.fractions[a] < 1.0) {
            xs.push_back(stat.alphas[a] * stat.alphas[a] / stat.mean_dt);
            ys.push_back(std::log(stat.fractions[a] / stat.mean_dt));
        }
    }
    if (xs.size() >= 2) stat.chi_hat = -least_squares(xs, ys).slope;
    return stat;
}

}  // namespace pinbm
