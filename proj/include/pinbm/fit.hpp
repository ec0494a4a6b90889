#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pinbm {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

/// Slope of log|y| against log t. Non-positive or non-finite y values are
/// skipped; when drop_ends is set the smallest and largest t are excluded
/// (the largest picks up higher-order terms, the smallest quadrature error).
inline LinearFit loglog_fit(std::vector<double> t, std::vector<double> y, bool drop_ends = true) {
    if (t.size() != y.size()) throw std::invalid_argument("loglog_fit: size mismatch");
    if (drop_ends && t.size() >= 5) {
        t.erase(t.begin());
        y.erase(y.begin());
        t.pop_back();
        y.pop_back();
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < t.size(); ++i) {
        double a = std::abs(y[i]);
        if (a > 0.0 && std::isfinite(a) && t[i] > 0.0) {
            lx.push_back(std::log(t[i]));
            ly.push_back(std::log(a));
        }
    }
    if (lx.size() < 3) throw std::runtime_error("loglog_fit: fewer than 3 usable points");
    return least_squares(lx, ly);
}

}  // namespace pinbm
