#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pinbm {

/// Ordered time grid of [0, 1]. times.front() = 0, times.back() = 1, strictly
/// increasing; mesh is the largest increment.
struct Partition {
    std::vector<double> times;
    double mesh = 0.0;

    static Partition from_times(std::vector<double> ts) {
        if (ts.size() < 2 || ts.front() != 0.0 || ts.back() != 1.0)
            throw std::invalid_argument("Partition: times must run from 0 to 1");
        double mesh = 0.0;
        for (size_t i = 1; i < ts.size(); ++i) {
            const double dt = ts[i] - ts[i - 1];
            if (!(dt > 0.0)) throw std::invalid_argument("Partition: times must increase strictly");
            mesh = std::max(mesh, dt);
        }
        return Partition{std::move(ts), mesh};
    }

    static Partition uniform(int n) {
        if (n < 1) throw std::invalid_argument("Partition: n >= 1");
        std::vector<double> ts(n + 1);
        for (int i = 0; i <= n; ++i) ts[i] = static_cast<double>(i) / n;
        ts.back() = 1.0;
        return from_times(std::move(ts));
    }

    /// n increments c * ratio^k scaled to total 1.
    static Partition geometric(int n, double ratio) {
        if (n < 1 || !(ratio > 0.0)) throw std::invalid_argument("Partition: bad geometric spec");
        std::vector<double> inc(n);
        double sum = 0.0, v = 1.0;
        for (int i = 0; i < n; ++i) {
            inc[i] = v;
            sum += v;
            v *= ratio;
        }
        std::vector<double> ts(n + 1);
        ts[0] = 0.0;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += inc[i] / sum;
            ts[i + 1] = acc;
        }
        ts.back() = 1.0;
        return from_times(std::move(ts));
    }

    size_t steps() const { return times.size() - 1; }

    std::vector<double> increments() const {
        std::vector<double> inc(steps());
        for (size_t i = 0; i < inc.size(); ++i) inc[i] = times[i + 1] - times[i];
        return inc;
    }

    double min_increment() const {
        double m = 1.0;
        for (double dt : increments()) m = std::min(m, dt);
        return m;
    }
};

}  // namespace pinbm
