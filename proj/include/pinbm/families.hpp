#pragma once

#include <stdexcept>
#include <string>

namespace pinbm {

/// The three one-step kernel families: the intrinsic pseudo-Gaussian in the
/// manifold distance, the ambient-distance Gaussian integrated over the
/// manifold volume, and the restricted (rescaled) ambient heat kernel.
enum class KernelKind { intrinsic_gauss, ambient_gauss, heat_restricted };

/// raw_s: un-normalized kernel masses. markov_t: per-step normalization to a
/// Markov kernel. rescaled_b: multiplied by e^{-t D(x)} so the step mass is
/// 1 + O(t^{3/2}). global_sigma: one normalization of the whole path
/// measure, realized by self-normalized importance weights at batch level.
enum class Normalization { raw_s, markov_t, rescaled_b, global_sigma };

/// Ambient space for heat_restricted. self_circle treats the circle as its
/// own ambient (wrapped heat kernel). sphere embeds a circle of radius
/// R*sin(colatitude) as a small circle in the 2-sphere of radius R; this
/// combination is gated behind a feature flag at validation time.
struct AmbientSpec {
    enum class Type { euclidean, self_circle, sphere };
    Type type = Type::euclidean;
    double sphere_radius = 0.0;
    double colatitude = 0.0;

    static AmbientSpec euclidean() { return {}; }
    static AmbientSpec self_circle() { return {Type::self_circle, 0.0, 0.0}; }
    static AmbientSpec sphere(double radius, double colatitude) {
        if (!(radius > 0.0) || !(colatitude > 0.0) || !(colatitude < M_PI))
            throw std::invalid_argument("AmbientSpec::sphere: need radius > 0, colatitude in (0, pi)");
        return {Type::sphere, radius, colatitude};
    }
};

struct KernelFamily {
    KernelKind kind = KernelKind::intrinsic_gauss;
    Normalization normalization = Normalization::markov_t;
    AmbientSpec ambient;
};

/// Thrown when a (family, manifold) combination is not implemented; the CLI
/// maps it to its own exit code.
class UnsupportedCombination : public std::runtime_error {
public:
    explicit UnsupportedCombination(const std::string& what) : std::runtime_error(what) {}
};

inline const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::intrinsic_gauss: return "intrinsic_gauss";
        case KernelKind::ambient_gauss: return "ambient_gauss";
        case KernelKind::heat_restricted: return "heat_restricted";
    }
    return "?";
}

inline const char* to_string(Normalization n) {
    switch (n) {
        case Normalization::raw_s: return "raw_s";
        case Normalization::markov_t: return "markov_t";
        case Normalization::rescaled_b: return "rescaled_b";
        case Normalization::global_sigma: return "global_sigma";
    }
    return "?";
}

}  // namespace pinbm
