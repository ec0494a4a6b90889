#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinbm/density_exponent.hpp"
#include "pinbm/pinning.hpp"
#include "pinbm/test_function.hpp"

namespace pinbm {

/// The discrete Feynman-Kac log-weight of a skeleton: the left-endpoint
/// Riemann sum sum_{k} (t_{k+1} - t_k) D(skeleton[k]) over the partition,
/// the last point excluded.
inline double discrete_fk_weight(const WeightedPath& path, KernelKind kind, const Manifold& mf,
                                 const AmbientSpec& ambient = AmbientSpec::euclidean()) {
    if (path.skeleton.empty()) throw std::invalid_argument("discrete_fk_weight: empty skeleton");
    double lw = 0.0;
    for (size_t k = 0; k + 1 < path.times.size(); ++k)
        lw += (path.times[k + 1] - path.times[k]) *
              density_exponent(kind, mf, path.skeleton[k], ambient);
    return lw;
}

struct WeightedSummary {
    double mean = 0.0;
    double se = 0.0;
    double ess = 0.0;
    double weight_variance = 0.0;  // variance of the self-normalized weights
};

/// Self-normalized importance-sampling mean with the delta-method standard
/// error: se^2 = sum wbar_i^2 (f_i - mean)^2 with wbar the normalized weights.
inline WeightedSummary weighted_summary(const std::vector<double>& values,
                                        const std::vector<double>& log_weights) {
    if (values.empty() || values.size() != log_weights.size())
        throw std::invalid_argument("weighted_summary: size mismatch");
    const double lmax = *std::max_element(log_weights.begin(), log_weights.end());
    double wsum = 0.0, wsq = 0.0;
    for (double lw : log_weights) {
        const double w = std::exp(lw - lmax);
        wsum += w;
        wsq += w * w;
    }
    WeightedSummary s;
    double acc = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
        acc += std::exp(log_weights[i] - lmax) * values[i];
    s.mean = acc / wsum;
    double var = 0.0, wvar = 0.0;
    const double n = static_cast<double>(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        const double wbar = std::exp(log_weights[i] - lmax) / wsum;
        var += wbar * wbar * (values[i] - s.mean) * (values[i] - s.mean);
        wvar += (wbar - 1.0 / n) * (wbar - 1.0 / n);
    }
    s.se = std::sqrt(var);
    s.ess = wsum * wsum / wsq;
    s.weight_variance = wvar / n;
    return s;
}

/// Kolmogorov-Smirnov distance of samples against a continuous CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max(d, std::abs(F - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
    }
    return d;
}

/// Asymptotic Kolmogorov distribution tail Q(lambda) with the standard
/// finite-n correction.
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// Bounded measurable functional of a skeleton.
struct PathFunctional {
    std::string id;
    std::function<double(const WeightedPath&, const Manifold&)> eval;
};

/// The built-in functionals: the test function at the final time, its
/// left-endpoint path integral, and the maximal arc displacement.
inline std::vector<PathFunctional> built_in_functionals(const TestFunction& f,
                                                        const std::string& tag) {
    std::vector<PathFunctional> out;
    out.push_back({"final_" + tag, [f](const WeightedPath& p, const Manifold& mf) {
                       return f.value(mf, p.skeleton.back());
                   }});
    out.push_back({"pathint_" + tag, [f](const WeightedPath& p, const Manifold& mf) {
                       double acc = 0.0;
                       for (size_t k = 0; k + 1 < p.times.size(); ++k)
                           acc += (p.times[k + 1] - p.times[k]) * f.value(mf, p.skeleton[k]);
                       return acc;
                   }});
    out.push_back({"max_arc_displacement", [](const WeightedPath& p, const Manifold& mf) {
                       double m = 0.0;
                       for (const auto& pt : p.skeleton)
                           m = std::max(m, mf.geodesic_distance(pt, p.skeleton.front()));
                       return m;
                   }});
    return out;
}

struct ComparisonReport {
    std::string functional_id;
    double pinned_estimate = 0.0;
    double pinned_se = 0.0;
    double reference_estimate = 0.0;
    double reference_se = 0.0;
    double z_score = 0.0;
    std::int64_t n_paths = 0;
    double mesh = 0.0;
    bool weight_free = false;
};

class EssTooLow : public std::runtime_error {
public:
    explicit EssTooLow(const std::string& what) : std::runtime_error(what) {}
};

/// Compares a globally-normalized pinned batch against a Feynman-Kac
/// weighted reference Brownian batch, functional by functional. Both sides
/// use self-normalized estimates; constant weights are detected and reported
/// as weight-free. Rejects reference batches whose effective sample size
/// falls below 5% of nominal.
inline std::vector<ComparisonReport> compare_ensembles(
    const std::vector<WeightedPath>& pinned, const std::vector<WeightedPath>& reference,
    const std::vector<PathFunctional>& functionals, const Manifold& mf, KernelKind kind,
    const AmbientSpec& ambient = AmbientSpec::euclidean()) {
    if (pinned.empty() || reference.empty())
        throw std::invalid_argument("compare_ensembles: empty batch");
    if (pinned.front().times != reference.front().times)
        throw std::invalid_argument("compare_ensembles: partitions differ");
    if (pinned.front().skeleton.front() != reference.front().skeleton.front())
        throw std::invalid_argument("compare_ensembles: start points differ");

    std::vector<double> lw_pin(pinned.size());
    for (size_t i = 0; i < pinned.size(); ++i) lw_pin[i] = pinned[i].log_weight;
    std::vector<double> lw_ref(reference.size());
    for (size_t i = 0; i < reference.size(); ++i)
        lw_ref[i] = discrete_fk_weight(reference[i], kind, mf, ambient);

    double mesh = 0.0;
    for (size_t k = 0; k + 1 < pinned.front().times.size(); ++k)
        mesh = std::max(mesh, pinned.front().times[k + 1] - pinned.front().times[k]);

    std::vector<ComparisonReport> reports;
    for (const auto& fun : functionals) {
        std::vector<double> vp(pinned.size()), vr(reference.size());
        for (size_t i = 0; i < pinned.size(); ++i) vp[i] = fun.eval(pinned[i], mf);
        for (size_t i = 0; i < reference.size(); ++i) vr[i] = fun.eval(reference[i], mf);
        const WeightedSummary sp = weighted_summary(vp, lw_pin);
        const WeightedSummary sr = weighted_summary(vr, lw_ref);
        if (sr.ess < 0.05 * static_cast<double>(reference.size()))
            throw EssTooLow("compare_ensembles: reference effective sample size below 5%");
        ComparisonReport rep;
        rep.functional_id = fun.id;
        rep.pinned_estimate = sp.mean;
        rep.pinned_se = sp.se;
        rep.reference_estimate = sr.mean;
        rep.reference_se = sr.se;
        rep.z_score = (sp.mean - sr.mean) / std::sqrt(sp.se * sp.se + sr.se * sr.se);
        rep.n_paths = static_cast<std::int64_t>(pinned.size());
        rep.mesh = mesh;
        rep.weight_free = sp.weight_variance < 1e-20 && sr.weight_variance < 1e-20;
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace pinbm
