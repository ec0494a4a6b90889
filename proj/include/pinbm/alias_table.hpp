#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pinbm/rng.hpp"

namespace pinbm {

/// Walker/Vose alias table for O(1) categorical draws. Construction is
/// deterministic in the order of the input weights.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights) {
        const size_t n = weights.size();
        if (n == 0) throw std::invalid_argument("AliasTable: empty weights");
        total_ = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw std::invalid_argument("AliasTable: weights must be finite and >= 0");
            total_ += w;
        }
        if (!(total_ > 0.0)) throw std::invalid_argument("AliasTable: all weights zero");

        prob_.assign(n, 0.0);
        alias_.assign(n, 0);
        std::vector<double> scaled(n);
        for (size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total_;

        std::vector<std::uint32_t> small, large;
        small.reserve(n);
        large.reserve(n);
        for (size_t i = 0; i < n; ++i)
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

        while (!small.empty() && !large.empty()) {
            const auto s = small.back();
            const auto l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (auto i : large) prob_[i] = 1.0;
        for (auto i : small) prob_[i] = 1.0;  // numerical leftovers
    }

    std::uint32_t sample(CounterRng& rng) const {
        const size_t n = prob_.size();
        double u = rng.uniform() * static_cast<double>(n);
        auto i = static_cast<size_t>(u);
        if (i >= n) i = n - 1;
        const double frac = u - static_cast<double>(i);
        return frac < prob_[i] ? static_cast<std::uint32_t>(i) : alias_[i];
    }

    double total_weight() const { return total_; }
    double log_total() const { return std::log(total_); }
    size_t size() const { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
    double total_ = 0.0;
};

}  // namespace pinbm
