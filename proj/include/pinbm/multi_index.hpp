#pragma once

#include <compare>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pinbm/half_int.hpp"

namespace pinbm {

/// Exponent vector of a space-time monomial t^{k0} xi_1^{k1} ... xi_n^{kn}.
/// k0 may be negative; space exponents are non-negative.
struct MultiIndex {
    int t_power = 0;
    std::vector<int> space;

    MultiIndex() = default;
    MultiIndex(int k0, std::vector<int> kspace) : t_power(k0), space(std::move(kspace)) {
        if (space.empty()) throw std::invalid_argument("MultiIndex: need n >= 1 space exponents");
        for (int k : space)
            if (k < 0) throw std::invalid_argument("MultiIndex: negative space exponent");
    }

    int dim() const { return static_cast<int>(space.size()); }

    int space_sum() const { return std::accumulate(space.begin(), space.end(), 0); }

    /// d(k) = k0 + (k1 + ... + kn)/2, exact.
    HalfInt degree() const { return HalfInt{2 * t_power + space_sum()}; }

    bool admissible() const { return !degree().is_negative(); }

    bool all_space_even() const {
        for (int k : space)
            if (k % 2 != 0) return false;
        return true;
    }

    bool is_constant() const { return t_power == 0 && space_sum() == 0; }

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

inline HalfInt degree(const MultiIndex& k) { return k.degree(); }

}  // namespace pinbm
