#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pinbm/experiments.hpp"

using namespace pinbm;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("pinbm_test_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

}  // namespace

TEST(Config, ParseErrors) {
    EXPECT_THROW(parse_config(nlohmann::json{{"foo", 1}}), ConfigError);
    EXPECT_THROW(parse_config(nlohmann::json{{"experiment", "nope"}}), ConfigError);
    EXPECT_THROW(parse_config(nlohmann::json{{"experiment", "wick_check"},
                                             {"manifold", {{"kind", "torus"}, {"radius", 1.0}}}}),
                 ConfigError);
    EXPECT_THROW(load_config("/nonexistent/path.json"), ConfigError);
}

TEST(Config, RoundTripAndDefaults) {
    nlohmann::json j = {
        {"experiment", "compare_density"},
        {"manifold", {{"kind", "ellipse"}, {"semi_axis_a", 1.0}, {"semi_axis_b", 0.5}}},
        {"family",
         {{"kind", "ambient_gauss"}, {"normalization", "global_sigma"},
          {"ambient", {{"type", "euclidean"}}}}},
        {"partition", {{"type", "uniform"}, {"n", 32}}},
        {"mc", {{"seed", 9}, {"paths", 100}, {"resolution", 256}}},
        {"start", {0.25}},
    };
    const ExperimentConfig cfg = parse_config(j);
    EXPECT_EQ(cfg.family.kind, KernelKind::ambient_gauss);
    EXPECT_EQ(cfg.partition.n, 32);
    EXPECT_EQ(cfg.mc.seed, 9u);
    EXPECT_DOUBLE_EQ(cfg.start[0], 0.25);

    for (const auto& name : experiment_names()) EXPECT_NO_THROW(default_config(name));
    EXPECT_EQ(list_experiments().size(), 7u);
    for (size_t i = 0; i < experiment_names().size(); ++i)
        EXPECT_EQ(list_experiments()[i].first, experiment_names()[i]);
}

TEST(Config, HashCoversExperimentFieldsOnly) {
    ExperimentConfig a = default_config("sample_pinned");
    const std::string h0 = make_stamp(a).config_hash;

    ExperimentConfig b = a;
    b.mc.seed += 1;
    EXPECT_NE(make_stamp(b).config_hash, h0);

    ExperimentConfig c = a;
    c.manifold_kind = ManifoldKind::sphere2;
    EXPECT_NE(make_stamp(c).config_hash, h0);

    ExperimentConfig d = a;
    d.partition.n *= 2;
    EXPECT_NE(make_stamp(d).config_hash, h0);

    ExperimentConfig e = a;
    e.threads = 8;
    e.out_dir = "elsewhere";
    e.strict = true;
    EXPECT_EQ(make_stamp(e).config_hash, h0);
}

TEST(Experiments, UnsupportedCombinations) {
    ExperimentConfig cfg = default_config("compare_density");
    cfg.out_dir = temp_dir("unsup1");
    cfg.family.normalization = Normalization::markov_t;
    EXPECT_THROW(run_experiment(cfg), UnsupportedCombination);

    ExperimentConfig heat = default_config("normalization_check");
    heat.out_dir = temp_dir("unsup2");
    heat.manifold_kind = ManifoldKind::circle;
    heat.param_a = std::sin(M_PI / 3);
    heat.family = {KernelKind::heat_restricted, Normalization::raw_s,
                   AmbientSpec::sphere(1.0, M_PI / 3)};
    heat.allow_sphere_ambient = false;
    EXPECT_THROW(run_experiment(heat), UnsupportedCombination);
    heat.allow_sphere_ambient = true;
    heat.t_grid = {2e-3, 5e-3, 1e-2, 2e-2};
    EXPECT_NO_THROW(run_experiment(heat));
}

TEST(Experiments, WickCheckEndToEnd) {
    ExperimentConfig cfg = default_config("wick_check");
    cfg.out_dir = temp_dir("wick");
    cfg.t_grid = {1e-2};
    const ExperimentResult res = run_experiment(cfg);
    EXPECT_TRUE(res.pass);
    EXPECT_TRUE(res.summary["pass"].get<bool>());
    const auto j = nlohmann::json::parse(slurp(cfg.out_dir + "/wick_check_summary.json"));
    EXPECT_EQ(j["stamp"]["config_hash"], make_stamp(cfg).config_hash);
    const std::string csv = slurp(cfg.out_dir + "/wick_check.csv");
    EXPECT_NE(csv.find(make_stamp(cfg).config_hash), std::string::npos);
}

TEST(Experiments, OutputsAreByteIdenticalAcrossThreadCounts) {
    ExperimentConfig cfg = default_config("sample_pinned");
    cfg.mc.paths = 128;
    cfg.interpolation = Interpolation::euclidean_bridge;
    cfg.mc.refinement_depth = 4;

    ExperimentConfig one = cfg, eight = cfg;
    one.threads = 1;
    one.out_dir = temp_dir("det1");
    eight.threads = 8;
    eight.out_dir = temp_dir("det8");
    run_experiment(one);
    run_experiment(eight);
    for (const char* name : {"paths.csv", "paths_fine.csv", "sample_pinned_summary.json"}) {
        const std::string a = slurp(one.out_dir + "/" + name);
        ASSERT_FALSE(a.empty()) << name;
        EXPECT_EQ(a, slurp(eight.out_dir + "/" + name)) << name;
    }
}

TEST(Experiments, ThresholdFailureIsReported) {
    ExperimentConfig cfg = default_config("bridge_stat");
    cfg.out_dir = temp_dir("fail");
    cfg.mc.paths = 50;
    cfg.alpha_grid = {5.0, 6.0, 7.0, 8.0, 9.0};  // nothing ever deviates this far
    const ExperimentResult res = run_experiment(cfg);
    EXPECT_FALSE(res.pass);
    EXPECT_FALSE(res.summary["pass"].get<bool>());
}
