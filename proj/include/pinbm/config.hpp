#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinbm/families.hpp"
#include "pinbm/io.hpp"
#include "pinbm/manifold.hpp"
#include "pinbm/partition.hpp"
#include "pinbm/pinning.hpp"

namespace pinbm {

/// Malformed configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct PartitionSpec {
    enum class Type { uniform, geometric, explicit_times };
    Type type = Type::uniform;
    int n = 64;
    double ratio = 1.2;
    std::vector<double> times;

    Partition build() const {
        switch (type) {
            case Type::uniform: return Partition::uniform(n);
            case Type::geometric: return Partition::geometric(n, ratio);
            case Type::explicit_times: return Partition::from_times(times);
        }
        throw ConfigError("partition: bad type");
    }
};

struct McSettings {
    std::uint64_t seed = 1;
    std::int64_t paths = 100000;
    int resolution = 512;
    int refinement_depth = 6;
};

struct ExperimentConfig {
    std::string experiment;
    ManifoldKind manifold_kind = ManifoldKind::circle;
    double param_a = 1.0;  // radius / semi-axis a
    double param_b = 0.5;  // semi-axis b
    KernelFamily family{KernelKind::intrinsic_gauss, Normalization::markov_t,
                        AmbientSpec::euclidean()};
    PartitionSpec partition;
    McSettings mc;
    std::vector<double> t_grid;      // asymptotic checks; empty = experiment default
    std::vector<double> s_grid;      // chord-arc scan
    std::vector<double> alpha_grid;  // bridge deviation thresholds
    PointParam start{0.0, 0.0};
    Interpolation interpolation = Interpolation::none;
    bool allow_sphere_ambient = false;
    // not part of the reproducibility hash:
    std::string out_dir = "out";
    int threads = 0;  // 0 = hardware concurrency
    bool strict = false;

    Manifold build_manifold() const {
        switch (manifold_kind) {
            case ManifoldKind::circle: return Manifold::circle(param_a);
            case ManifoldKind::ellipse: return Manifold::ellipse(param_a, param_b);
            case ManifoldKind::sphere2: return Manifold::sphere(param_a);
        }
        throw ConfigError("manifold: bad kind");
    }
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "wick_check",    "chernoff_check", "hessian_limit", "normalization_check",
        "sample_pinned", "compare_density", "bridge_stat"};
    return names;
}

namespace detail {

inline KernelKind parse_kernel_kind(const std::string& s) {
    if (s == "intrinsic_gauss") return KernelKind::intrinsic_gauss;
    if (s == "ambient_gauss") return KernelKind::ambient_gauss;
    if (s == "heat_restricted") return KernelKind::heat_restricted;
    throw ConfigError("family.kind: unknown '" + s + "'");
}

inline Normalization parse_normalization(const std::string& s) {
    if (s == "raw_s") return Normalization::raw_s;
    if (s == "markov_t") return Normalization::markov_t;
    if (s == "rescaled_b") return Normalization::rescaled_b;
    if (s == "global_sigma") return Normalization::global_sigma;
    throw ConfigError("family.normalization: unknown '" + s + "'");
}

inline Interpolation parse_interpolation(const std::string& s) {
    if (s == "none") return Interpolation::none;
    if (s == "l_geodesic") return Interpolation::l_geodesic;
    if (s == "m_geodesic") return Interpolation::m_geodesic;
    if (s == "euclidean_bridge") return Interpolation::euclidean_bridge;
    throw ConfigError("interpolation: unknown '" + s + "'");
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    try {
        ExperimentConfig cfg;
        cfg.experiment = j.at("experiment").get<std::string>();
        bool known = false;
        for (const auto& name : experiment_names()) known |= name == cfg.experiment;
        if (!known) throw ConfigError("experiment: unknown '" + cfg.experiment + "'");

        if (j.contains("manifold")) {
            const auto& m = j.at("manifold");
            const std::string kind = m.at("kind").get<std::string>();
            if (kind == "circle") {
                cfg.manifold_kind = ManifoldKind::circle;
                cfg.param_a = m.at("radius").get<double>();
            } else if (kind == "ellipse") {
                cfg.manifold_kind = ManifoldKind::ellipse;
                cfg.param_a = m.at("semi_axis_a").get<double>();
                cfg.param_b = m.at("semi_axis_b").get<double>();
            } else if (kind == "sphere") {
                cfg.manifold_kind = ManifoldKind::sphere2;
                cfg.param_a = m.at("radius").get<double>();
            } else {
                throw ConfigError("manifold.kind: unknown '" + kind + "'");
            }
        }
        if (j.contains("family")) {
            const auto& f = j.at("family");
            cfg.family.kind = detail::parse_kernel_kind(f.at("kind").get<std::string>());
            if (f.contains("normalization"))
                cfg.family.normalization =
                    detail::parse_normalization(f.at("normalization").get<std::string>());
            if (f.contains("ambient")) {
                const auto& a = f.at("ambient");
                const std::string type = a.at("type").get<std::string>();
                if (type == "euclidean") {
                    cfg.family.ambient = AmbientSpec::euclidean();
                } else if (type == "self_circle") {
                    cfg.family.ambient = AmbientSpec::self_circle();
                } else if (type == "sphere") {
                    cfg.family.ambient = AmbientSpec::sphere(a.at("radius").get<double>(),
                                                             a.at("colatitude").get<double>());
                } else {
                    throw ConfigError("family.ambient.type: unknown '" + type + "'");
                }
            }
        }
        if (j.contains("partition")) {
            const auto& p = j.at("partition");
            const std::string type = p.at("type").get<std::string>();
            if (type == "uniform") {
                cfg.partition.type = PartitionSpec::Type::uniform;
                cfg.partition.n = p.at("n").get<int>();
            } else if (type == "geometric") {
                cfg.partition.type = PartitionSpec::Type::geometric;
                cfg.partition.n = p.at("n").get<int>();
                cfg.partition.ratio = p.at("ratio").get<double>();
            } else if (type == "explicit") {
                cfg.partition.type = PartitionSpec::Type::explicit_times;
                cfg.partition.times = p.at("times").get<std::vector<double>>();
            } else {
                throw ConfigError("partition.type: unknown '" + type + "'");
            }
        }
        if (j.contains("mc")) {
            const auto& m = j.at("mc");
            if (m.contains("seed")) cfg.mc.seed = m.at("seed").get<std::uint64_t>();
            if (m.contains("paths")) cfg.mc.paths = m.at("paths").get<std::int64_t>();
            if (m.contains("resolution")) cfg.mc.resolution = m.at("resolution").get<int>();
            if (m.contains("refinement_depth"))
                cfg.mc.refinement_depth = m.at("refinement_depth").get<int>();
        }
        if (j.contains("t_grid")) cfg.t_grid = j.at("t_grid").get<std::vector<double>>();
        if (j.contains("s_grid")) cfg.s_grid = j.at("s_grid").get<std::vector<double>>();
        if (j.contains("alpha_grid")) cfg.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
        if (j.contains("start")) {
            const auto v = j.at("start").get<std::vector<double>>();
            if (v.empty() || v.size() > 2) throw ConfigError("start: need 1 or 2 coordinates");
            cfg.start = {v[0], v.size() > 1 ? v[1] : 0.0};
        }
        if (j.contains("interpolation"))
            cfg.interpolation = detail::parse_interpolation(j.at("interpolation").get<std::string>());
        if (j.contains("allow_sphere_ambient"))
            cfg.allow_sphere_ambient = j.at("allow_sphere_ambient").get<bool>();
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
        if (j.contains("strict")) cfg.strict = j.at("strict").get<bool>();
        if (cfg.mc.paths < 1) throw ConfigError("mc.paths: must be >= 1");
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(j);
}

/// The experiment-defining fields, serialized with sorted keys. Execution
/// details (out_dir, threads, strict) are excluded so that re-running with a
/// different worker count produces byte-identical outputs.
inline std::string canonical_config(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    switch (cfg.manifold_kind) {
        case ManifoldKind::circle:
            j["manifold"] = {{"kind", "circle"}, {"radius", cfg.param_a}};
            break;
        case ManifoldKind::ellipse:
            j["manifold"] = {{"kind", "ellipse"}, {"semi_axis_a", cfg.param_a},
                             {"semi_axis_b", cfg.param_b}};
            break;
        case ManifoldKind::sphere2:
            j["manifold"] = {{"kind", "sphere"}, {"radius", cfg.param_a}};
            break;
    }
    j["family"] = {{"kind", to_string(cfg.family.kind)},
                   {"normalization", to_string(cfg.family.normalization)}};
    switch (cfg.family.ambient.type) {
        case AmbientSpec::Type::euclidean:
            j["family"]["ambient"] = "euclidean";
            break;
        case AmbientSpec::Type::self_circle:
            j["family"]["ambient"] = "self_circle";
            break;
        case AmbientSpec::Type::sphere:
            j["family"]["ambient"] = {{"type", "sphere"},
                                      {"radius", cfg.family.ambient.sphere_radius},
                                      {"colatitude", cfg.family.ambient.colatitude}};
            break;
    }
    switch (cfg.partition.type) {
        case PartitionSpec::Type::uniform:
            j["partition"] = {{"type", "uniform"}, {"n", cfg.partition.n}};
            break;
        case PartitionSpec::Type::geometric:
            j["partition"] = {{"type", "geometric"}, {"n", cfg.partition.n},
                              {"ratio", cfg.partition.ratio}};
            break;
        case PartitionSpec::Type::explicit_times:
            j["partition"] = {{"type", "explicit"}, {"times", cfg.partition.times}};
            break;
    }
    j["mc"] = {{"seed", cfg.mc.seed},
               {"paths", cfg.mc.paths},
               {"resolution", cfg.mc.resolution},
               {"refinement_depth", cfg.mc.refinement_depth}};
    j["t_grid"] = cfg.t_grid;
    j["s_grid"] = cfg.s_grid;
    j["alpha_grid"] = cfg.alpha_grid;
    j["start"] = {cfg.start[0], cfg.start[1]};
    j["interpolation"] = to_string(cfg.interpolation);
    j["allow_sphere_ambient"] = cfg.allow_sphere_ambient;
    return j.dump();
}

inline Stamp make_stamp(const ExperimentConfig& cfg) {
    Stamp s;
    s.config_hash = to_hex(fnv1a64(canonical_config(cfg)));
    s.seed = cfg.mc.seed;
    return s;
}

}  // namespace pinbm
