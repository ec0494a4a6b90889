// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pinbm/experiments.hpp"

using namespace pinbm;

namespace {

int g_threads = 2;
std::string g_out;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return out;
}

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

// --- C1: Wick exactness ----------------------------------------------------
bool c1(std::string& detail) {
    ExperimentConfig cfg = default_config("wick_check");
    cfg.out_dir = g_out + "/c1";
    cfg.threads = g_threads;
    const ExperimentResult res = run_wick_check(cfg);
    std::ostringstream ss;
    ss << "max_scaled_err=" << res.summary["max_scaled_error"].get<double>()
       << " cases=" << res.summary["count"].get<std::int64_t>();
    detail = ss.str();
    return res.pass;
}

// --- C2: chord-arc constant -------------------------------------------------
bool c2(std::string& detail) {
    const Manifold circle = Manifold::circle(1.0);
    const Manifold sphere = Manifold::sphere(1.0);
    const Manifold ellipse = Manifold::ellipse(1.0, 0.5);
    const double dc = circle.chord_arc_defect({0.3, 0}, +1, 1e-2);
    const double ds = sphere.chord_arc_defect({1.1, 0.4}, 0.3, 1e-2);
    const double de = ellipse.chord_arc_defect({0.0, 0}, +1, 1e-2);
    std::ostringstream ss;
    ss << "circle=" << dc << " sphere=" << ds << " ellipse_vertex=" << de;
    detail = ss.str();
    return std::abs(dc + 1.0 / 12.0) <= 1e-3 && std::abs(ds + 1.0 / 12.0) <= 1e-3 &&
           std::abs(de + 16.0 / 12.0) <= 2e-2;
}

// --- C3: normalization asymptotics and the frozen sign ----------------------
bool c3(std::string& detail) {
    const std::vector<double> ts = logspace(1e-4, 1e-2, 7);
    struct Pair {
        std::string name;
        KernelFamily fam;
        Manifold mf;
        PointParam x;
        bool slope_case;
    };
    const AmbientSpec eu = AmbientSpec::euclidean();
    std::vector<Pair> pairs = {
        {"intrinsic/sphere", {KernelKind::intrinsic_gauss, Normalization::raw_s, eu},
         Manifold::sphere(1.0), {1.1, 0.7}, true},
        {"ambient/circle", {KernelKind::ambient_gauss, Normalization::raw_s, eu},
         Manifold::circle(1.0), {0.4, 0}, true},
        {"ambient/ellipse", {KernelKind::ambient_gauss, Normalization::raw_s, eu},
         Manifold::ellipse(1.0, 0.5), {0.0, 0}, true},
        {"heat/circle", {KernelKind::heat_restricted, Normalization::raw_s, eu},
         Manifold::circle(1.0), {0.4, 0}, true},
        {"intrinsic/circle", {KernelKind::intrinsic_gauss, Normalization::raw_s, eu},
         Manifold::circle(1.0), {0.4, 0}, false},
        {"intrinsic/ellipse", {KernelKind::intrinsic_gauss, Normalization::raw_s, eu},
         Manifold::ellipse(1.0, 0.5), {1.0, 0}, false},
        {"ambient/sphere", {KernelKind::ambient_gauss, Normalization::raw_s, eu},
         Manifold::sphere(1.0), {0.9, 2.0}, false},
        {"heat-self/circle",
         {KernelKind::heat_restricted, Normalization::raw_s, AmbientSpec::self_circle()},
         Manifold::circle(1.0), {0.4, 0}, false},
    };
    std::ostringstream ss;
    bool ok = true;
    for (const auto& p : pairs) {
        std::vector<double> res, flipped;
        for (double t : ts) {
            const QuadratureGrid grid(p.mf, adequate_resolution(p.mf, t));
            const auto rep = normalization_b(p.fam, p.mf, t, p.x, grid);
            res.push_back(std::abs(rep.residual));
            const double d = density_exponent(p.fam.kind, p.mf, p.x, p.fam.ambient);
            flipped.push_back(std::abs(rep.b_value - std::exp(-t * d)));
        }
        if (p.slope_case) {
            const double slope = loglog_fit(ts, res).slope;
            ss << p.name << " slope=" << slope << "; ";
            ok = ok && slope >= 1.4;
            if (p.name == "intrinsic/sphere") {
                const double fslope = loglog_fit(ts, flipped).slope;
                ss << "flipped_slope=" << fslope << "; ";
                ok = ok && fslope <= 1.2;  // the opposite sign must fail the slope test
            }
        } else {
            double mx = 0.0;
            for (double r : res) mx = std::max(mx, r);
            ss << p.name << " floor=" << mx << "; ";
            ok = ok && mx <= 1e-8;
        }
    }
    detail = ss.str();
    return ok;
}

// --- C4: Chernoff product convergence ---------------------------------------
bool c4(std::string& detail) {
    ExperimentConfig cfg = default_config("chernoff_check");
    cfg.out_dir = g_out + "/c4";
    cfg.threads = g_threads;
    cfg.partition.n = 64;
    const ExperimentResult res = run_chernoff_check(cfg);
    std::ostringstream ss;
    ss << "uniform=" << res.summary["product_error_uniform"].get<double>()
       << " geometric=" << res.summary["product_error_geometric"].get<double>();
    detail = ss.str();
    return res.summary["product_error_uniform"].get<double>() <= 5e-3 &&
           res.summary["product_error_geometric"].get<double>() <= 5e-3;
}

// --- C5: Chernoff residual order ---------------------------------------------
bool c5(std::string& detail) {
    const AmbientSpec eu = AmbientSpec::euclidean();
    const Manifold circle = Manifold::circle(1.0);
    const Manifold sphere = Manifold::sphere(1.0);

    const auto ts_curve = logspace(1e-3, 0.1, 9);
    const QuadratureGrid gc(circle, adequate_resolution(circle, ts_curve.front()));
    const auto rep1 =
        chernoff_residual({KernelKind::intrinsic_gauss, Normalization::markov_t, eu}, circle,
                          TestFunction::circle_mode(2), ts_curve, gc, g_threads);

    const auto ts_sphere = logspace(2e-2, 0.3, 8);
    const QuadratureGrid gs(sphere, adequate_resolution(sphere, ts_sphere.front()));
    const auto rep2 =
        chernoff_residual({KernelKind::intrinsic_gauss, Normalization::markov_t, eu}, sphere,
                          TestFunction::sphere_harmonic(2, 0), ts_sphere, gs, g_threads);
    const auto rep3 =
        chernoff_residual({KernelKind::ambient_gauss, Normalization::rescaled_b, eu}, sphere,
                          TestFunction::sphere_harmonic(2, 0), ts_sphere, gs, g_threads);
    std::ostringstream ss;
    ss << "circle_markov=" << rep1.fitted_order << " sphere_markov=" << rep2.fitted_order
       << " sphere_rescaled=" << rep3.fitted_order;
    detail = ss.str();
    return rep1.fitted_order >= 0.4 && rep2.fitted_order >= 0.4 && rep3.fitted_order >= 0.4;
}

// --- C6: unit-sphere cancellation --------------------------------------------
bool c6(std::string& detail) {
    const Manifold sphere = Manifold::sphere(1.0);
    CounterRng rng = CounterRng::stream(314, 0);
    double dmax = 0.0;
    for (int i = 0; i < 100; ++i) {
        const PointParam x = {std::acos(2 * rng.uniform() - 1), 2 * M_PI * rng.uniform()};
        dmax = std::max(dmax, std::abs(density_exponent(KernelKind::ambient_gauss, sphere, x)));
    }
    ExperimentConfig cfg = default_config("compare_density");
    cfg.out_dir = g_out + "/c6";
    cfg.threads = g_threads;
    cfg.manifold_kind = ManifoldKind::sphere2;
    cfg.param_a = 1.0;
    cfg.family = {KernelKind::ambient_gauss, Normalization::global_sigma,
                  AmbientSpec::euclidean()};
    cfg.mc.paths = 100000;
    cfg.mc.resolution = adequate_resolution(sphere, 1.0 / 64);
    cfg.partition = {};
    cfg.partition.n = 64;
    cfg.start = {1.2, 0.5};
    const ExperimentResult res = run_compare_density(cfg);
    const double ks_p = res.summary["ks_final_angle"]["p_value"].get<double>();
    std::ostringstream ss;
    ss << "max|D|=" << dmax << " ks_p=" << ks_p;
    detail = ss.str();
    return dmax <= 1e-12 && ks_p > 0.01 && res.pass;
}

// --- C7: ellipse density law --------------------------------------------------
bool c7(std::string& detail) {
    ExperimentConfig cfg = default_config("compare_density");
    cfg.out_dir = g_out + "/c7";
    cfg.threads = g_threads;
    cfg.mc.paths = 100000;
    cfg.partition.n = 64;
    const ExperimentResult res = run_compare_density(cfg);
    std::ostringstream ss;
    double z_max = 0.0;
    for (const auto& r : res.summary["reports"]) {
        z_max = std::max(z_max, std::abs(r["z_adj"].get<double>()));
        ss << r["functional_id"].get<std::string>() << " z_adj=" << r["z_adj"].get<double>()
           << "; ";
    }
    const double z_occ = res.summary["occupation"]["z"].get<double>();
    ss << "occupation_z=" << z_occ << " (frozen sign: pinned favors curvature)";
    detail = ss.str();
    return z_max <= 3.0 && z_occ >= 3.0;
}

// --- C8: weight-ratio identity --------------------------------------------------
bool c8(std::string& detail) {
    struct Combo {
        Manifold mf;
        KernelKind kind;
        AmbientSpec ambient;
        PointParam x0;
    };
    const AmbientSpec eu = AmbientSpec::euclidean();
    const std::vector<Combo> combos = {
        {Manifold::circle(1.0), KernelKind::intrinsic_gauss, eu, {0.1, 0}},
        {Manifold::ellipse(1.0, 0.5), KernelKind::intrinsic_gauss, eu, {0.5, 0}},
        {Manifold::sphere(1.0), KernelKind::intrinsic_gauss, eu, {1.0, 0.3}},
        {Manifold::circle(1.0), KernelKind::ambient_gauss, eu, {0.2, 0}},
        {Manifold::ellipse(1.0, 0.5), KernelKind::ambient_gauss, eu, {0.0, 0}},
        {Manifold::sphere(1.0), KernelKind::ambient_gauss, eu, {2.0, 1.0}},
        {Manifold::circle(1.0), KernelKind::heat_restricted, AmbientSpec::self_circle(), {0.7, 0}},
        {Manifold::circle(1.0), KernelKind::heat_restricted, eu, {0.7, 0}},
        {Manifold::ellipse(1.0, 0.5), KernelKind::heat_restricted, eu, {1.2, 0}},
        {Manifold::sphere(1.0), KernelKind::heat_restricted, eu, {0.8, 4.0}},
    };
    double worst = 0.0;
    for (const auto& combo : combos) {
        SamplerConfig scfg;
        scfg.seed = 99;
        scfg.paths = 1000;
        scfg.partition = Partition::uniform(64);
        scfg.resolution = combo.mf.is_curve() ? 512 : adequate_resolution(combo.mf, 1.0 / 64);
        scfg.family = {combo.kind, Normalization::raw_s, combo.ambient};
        const auto raw = sample_batch(scfg, combo.mf, combo.x0, g_threads);
        scfg.family.normalization = Normalization::rescaled_b;
        const auto resc = sample_batch(scfg, combo.mf, combo.x0, g_threads);
        for (size_t i = 0; i < raw.size(); ++i) {
            const double fk = discrete_fk_weight(raw[i], combo.kind, combo.mf, combo.ambient);
            worst = std::max(worst, std::abs(raw[i].log_weight - resc[i].log_weight - fk));
        }
    }
    std::ostringstream ss;
    ss << "max|(raw-rescaled)-fk|=" << worst << " over 10 combos x 1000 paths";
    detail = ss.str();
    return worst <= 1e-8;
}

// --- C9: bridge deviation shape ---------------------------------------------
bool c9(std::string& detail) {
    ExperimentConfig cfg = default_config("bridge_stat");
    cfg.out_dir = g_out + "/c9";
    cfg.threads = g_threads;
    cfg.mc.paths = 1563;  // 64 segments each: ~1e5 segments
    const ExperimentResult res = run_bridge_stat(cfg);
    std::ostringstream ss;
    ss << "chi_hat=" << res.summary["chi_hat"].get<double>()
       << " segments=" << res.summary["segments"].get<std::int64_t>()
       << " monotone=" << res.summary["monotone"].get<bool>();
    detail = ss.str();
    return res.summary["chi_hat"].get<double>() > 0.0 && res.summary["monotone"].get<bool>();
}

// --- C10: determinism ---------------------------------------------------------
bool c10(std::string& detail) {
    ExperimentConfig cfg = default_config("sample_pinned");
    cfg.mc.paths = 256;
    cfg.interpolation = Interpolation::euclidean_bridge;
    cfg.mc.refinement_depth = 4;

    ExperimentConfig one = cfg, eight = cfg;
    one.threads = 1;
    one.out_dir = g_out + "/c10_t1";
    eight.threads = 8;
    eight.out_dir = g_out + "/c10_t8";
    run_sample_pinned(one);
    run_sample_pinned(eight);
    bool ok = true;
    for (const char* name : {"paths.csv", "paths_fine.csv", "sample_pinned_summary.json"}) {
        const std::string a = slurp(one.out_dir + "/" + std::string(name));
        const std::string b = slurp(eight.out_dir + "/" + std::string(name));
        ok = ok && !a.empty() && a == b;
    }

    ExperimentConfig bs = default_config("bridge_stat");
    bs.mc.paths = 200;
    ExperimentConfig bs1 = bs, bs8 = bs;
    bs1.threads = 1;
    bs1.out_dir = g_out + "/c10_b1";
    bs8.threads = 8;
    bs8.out_dir = g_out + "/c10_b8";
    run_bridge_stat(bs1);
    run_bridge_stat(bs8);
    for (const char* name : {"bridge_stat.csv", "bridge_stat_summary.json"}) {
        const std::string a = slurp(bs1.out_dir + "/" + std::string(name));
        const std::string b = slurp(bs8.out_dir + "/" + std::string(name));
        ok = ok && !a.empty() && a == b;
    }
    detail = ok ? "outputs byte-identical for --threads 1 vs 8"
                : "outputs differ between thread counts";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    g_out = argc > 1 ? argv[1] : "acceptance_out";
    std::filesystem::create_directories(g_out);
    const unsigned hc = std::thread::hardware_concurrency();
    g_threads = hc == 0 ? 1 : static_cast<int>(hc);

    const std::vector<Criterion> criteria = {
        {"C1 Wick exactness (exact vs quadrature oracle, 1e-10 relative)", 10, c1},
        {"C2 chord-arc constant (-1/12, -kappa^2/12)", 1, c2},
        {"C3 normalization asymptotics + frozen sign discriminator", 60, c3},
        {"C4 Chernoff product convergence (uniform + geometric, 5e-3)", 30, c4},
        {"C5 Chernoff residual order >= 0.4 (three families)", 120, c5},
        {"C6 unit-sphere cancellation (D=0, heat-kernel KS)", 300, c6},
        {"C7 ellipse density law (z_adj <= 3, occupation tilt 3 sigma)", 600, c7},
        {"C8 weight-ratio identity (1e-8, all supported combos)", 60, c8},
        {"C9 bridge deviation shape (chi_hat > 0, monotone)", 120, c9},
        {"C10 determinism across thread counts (byte-identical)", 60, c10},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            ok = false;
            detail += " [over budget]";
        }
        std::printf("%s  %s (%.1fs / budget %.0fs)\n    %s\n", ok ? "PASS" : "FAIL",
                    c.name.c_str(), secs, c.budget_seconds, detail.c_str());
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures;
}
