#pragma once

#include <compare>

namespace pinbm {

/// Exact half-integer, stored as twice its value. Degrees of space-time
/// monomials live in (1/2)Z and grading comparisons must not go through
/// floating point.
struct HalfInt {
    int twice = 0;

    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int twice_value) : twice(twice_value) {}

    static constexpr HalfInt from_int(int n) { return HalfInt{2 * n}; }
    static constexpr HalfInt half(int numerator) { return HalfInt{numerator}; }

    constexpr double value() const { return 0.5 * static_cast<double>(twice); }
    constexpr bool is_integer() const { return twice % 2 == 0; }
    constexpr bool is_negative() const { return twice < 0; }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt{a.twice + b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt{a.twice - b.twice}; }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;
};

}  // namespace pinbm
