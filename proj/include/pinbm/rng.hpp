#pragma once

#include <cmath>
#include <cstdint>

namespace pinbm {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based generator (keyed SplitMix64). A stream is fully determined
/// by (seed, stream id), so per-path streams give results independent of
/// thread count and evaluation order across paths.
class CounterRng {
public:
    CounterRng() : key_(0) {}
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static CounterRng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return CounterRng(detail::mix64(seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1)));
    }

    /// Derived independent stream (e.g. interpolation draws after skeleton draws).
    CounterRng fork(std::uint64_t tag) const {
        return CounterRng(detail::mix64(key_ ^ detail::mix64(tag + 0xD1B54A32D192ED03ULL)));
    }

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return detail::mix64(key_ ^ counter_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the spare is cached per stream.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pinbm
