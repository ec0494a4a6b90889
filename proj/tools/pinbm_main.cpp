#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pinbm/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    bool strict = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config_path, "JSON experiment configuration");
    sub->add_option("--out", flags.out_dir, "output directory (default: out)");
    sub->add_flag("--strict", flags.strict, "exit nonzero when a threshold fails");
    sub->add_option("--seed", flags.seed, "override the configured seed")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    sub->add_option("--threads", flags.threads, "worker count (default: machine parallelism)");
}

int run(const std::string& experiment, const CommonFlags& flags) {
    try {
        pinbm::ExperimentConfig cfg = flags.config_path.empty()
                                          ? pinbm::default_config(experiment)
                                          : pinbm::load_config(flags.config_path);
        cfg.experiment = experiment;
        if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
        if (flags.strict) cfg.strict = true;
        if (flags.seed_set) cfg.mc.seed = flags.seed;
        if (flags.threads >= 0) cfg.threads = flags.threads;
        const pinbm::ExperimentResult res = pinbm::run_experiment(cfg);
        std::printf("%s: %s (outputs in %s)\n", experiment.c_str(),
                    res.pass ? "pass" : "thresholds violated", cfg.out_dir.c_str());
        if (cfg.strict && !res.pass) return 1;
        return 0;
    } catch (const pinbm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const pinbm::UnsupportedCombination& e) {
        std::fprintf(stderr, "unsupported combination: %s\n", e.what());
        return 3;
    } catch (const pinbm::GridTooCoarse& e) {
        std::fprintf(stderr, "unsupported combination: %s\n", e.what());
        return 3;
    } catch (const pinbm::EssTooLow& e) {
        std::fprintf(stderr, "unsupported combination: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-time pinning approximations of Brownian motion on closed manifolds"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"wick-check", "wick_check"},
        {"chernoff-check", "chernoff_check"},
        {"hessian-limit", "hessian_limit"},
        {"normalization-check", "normalization_check"},
        {"sample-pinned", "sample_pinned"},
        {"compare-density", "compare_density"},
        {"bridge-stat", "bridge_stat"},
    };

    std::vector<CommonFlags> flags(subs.size());
    std::vector<CLI::App*> apps;
    for (size_t i = 0; i < subs.size(); ++i) {
        auto descr = pinbm::list_experiments()[i].second;
        CLI::App* sub = app.add_subcommand(subs[i].first, descr);
        add_common(sub, flags[i]);
        apps.push_back(sub);
    }
    CLI::App* list_cmd = app.add_subcommand("list", "list the experiments and what they verify");

    CLI11_PARSE(app, argc, argv);

    if (list_cmd->parsed()) {
        for (const auto& [name, what] : pinbm::list_experiments())
            std::printf("%-22s %s\n", name.c_str(), what.c_str());
        return 0;
    }
    for (size_t i = 0; i < subs.size(); ++i)
        if (apps[i]->parsed()) return run(subs[i].second, flags[i]);
    return 2;
}
