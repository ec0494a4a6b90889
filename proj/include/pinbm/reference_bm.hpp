#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pinbm/manifold.hpp"
#include "pinbm/partition.hpp"
#include "pinbm/pinning.hpp"
#include "pinbm/rng.hpp"
#include "pinbm/special_kernels.hpp"

namespace pinbm {

/// Exact Brownian motion on L (generator Laplacian/2). Curves use wrapped
/// Gaussian arc increments (the ellipse is isometric to the circle of equal
/// perimeter); the sphere draws the geodesic angle by inverse CDF of the
/// heat-kernel marginal, tabulated per increment, plus a uniform azimuth.
class ReferenceBm {
public:
    explicit ReferenceBm(Manifold mf) : mf_(std::move(mf)) {}

    const Manifold& manifold() const { return mf_; }

    WeightedPath sample(const Partition& partition, PointParam x, CounterRng& rng) const {
        WeightedPath path;
        path.times = partition.times;
        path.skeleton.reserve(partition.times.size());
        path.skeleton.push_back(mf_.reduce(x));
        for (size_t k = 0; k + 1 < partition.times.size(); ++k) {
            const double dt = partition.times[k + 1] - partition.times[k];
            const PointParam prev = path.skeleton.back();
            if (mf_.is_curve()) {
                path.skeleton.push_back(mf_.reduce({prev[0] + std::sqrt(dt) * rng.normal(), 0.0}));
            } else {
                const double theta = sample_angle(dt, rng);
                const double psi = 2.0 * M_PI * rng.uniform();
                path.skeleton.push_back(mf_.geodesic_step(prev, psi, mf_.radius() * theta));
            }
        }
        return path;
    }

    std::vector<WeightedPath> sample_batch(const Partition& partition, PointParam x,
                                           std::int64_t n_paths, std::uint64_t seed,
                                           int n_threads = 1) const {
        if (!mf_.is_curve())
            for (double dt : partition.increments()) (void)angle_table(dt);
        std::vector<WeightedPath> out(static_cast<size_t>(n_paths));
        auto work = [&](size_t i) {
            CounterRng rng = CounterRng::stream(seed, i);
            out[i] = sample(partition, x, rng);
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

private:
    struct AngleCdf {
        std::vector<double> theta, cdf;
    };

    double sample_angle(double dt, CounterRng& rng) const {
        const auto table = angle_table(dt);
        const double u = rng.uniform();
        const auto& F = table->cdf;
        size_t lo = 0, hi = F.size() - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            (F[mid] < u ? lo : hi) = mid;
        }
        const double f0 = F[lo], f1 = F[hi];
        const double w = f1 > f0 ? (u - f0) / (f1 - f0) : 0.5;
        return table->theta[lo] + w * (table->theta[hi] - table->theta[lo]);
    }

    std::shared_ptr<const AngleCdf> angle_table(double dt) const {
        std::uint64_t key;
        std::memcpy(&key, &dt, sizeof(key));
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const int M = 2048;
        auto table = std::make_shared<AngleCdf>();
        table->theta.resize(M + 1);
        table->cdf.resize(M + 1);
        for (int i = 0; i <= M; ++i) {
            table->theta[i] = M_PI * i / M;
            table->cdf[i] = sphere_heat_cdf(mf_.radius(), dt, table->theta[i]);
        }
        table->cdf.front() = 0.0;
        table->cdf.back() = 1.0;
        std::lock_guard<std::mutex> lock(mutex_);
        auto [it, inserted] = cache_.emplace(key, std::move(table));
        return it->second;
    }

    Manifold mf_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::shared_ptr<const AngleCdf>> cache_;
};

}  // namespace pinbm
