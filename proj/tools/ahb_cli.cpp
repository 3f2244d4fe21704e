#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ahb/harness/runner.hpp"
#include "ahb/noise.hpp"
#include "ahb/problems/elliptic.hpp"
#include "ahb/random.hpp"

namespace {

int finish(const ahb::ExperimentResult& result) {
    std::cout << ahb::render_summary(result.runs);
    std::cout << "summary written to " << result.summary_path.string() << "\n";
    if (!result.skipped.empty()) {
        for (const auto& s : result.skipped) std::cout << "skipped: " << s << "\n";
        return 2;
    }
    return result.all_discrepancy ? 0 : 2;
}

void apply_overrides(ahb::ExperimentConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& out, const std::optional<int>& jobs,
                     const std::optional<int>& max_iter) {
    if (seed) cfg.noise.seed = *seed;
    if (out) cfg.output.dir = *out;
    if (jobs) cfg.jobs = *jobs;
    if (max_iter)
        for (auto& m : cfg.methods) m.solver.max_iter = *max_iter;
}

// Adjoint and (for the elliptic problem) derivative self-tests on the
// configured problem; returns true when every check passes.
bool self_test(const ahb::ExperimentConfig& cfg) {
    const ahb::ProblemBundle bundle = ahb::build_problem(cfg.problem);
    const ahb::ForwardProblem& prob = *bundle.problem;
    ahb::GaussianSampler rng(12345);

    double worst = 0.0;
    const ahb::GridVector base = bundle.truth;
    for (int k = 0; k < 100; ++k) {
        ahb::GridVector h = prob.zero_parameter();
        ahb::GridVector w = prob.zero_data();
        h.values = rng.vector(h.size());
        w.values = rng.vector(w.size());
        const double lhs = inner(prob.lin_apply(base, h), w);
        const double rhs = inner(h, prob.lin_adjoint(base, w));
        const double scale = 1.0 + ahb::norm(h) * ahb::norm(w);
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    std::cout << "adjoint consistency (100 random pairs): max mismatch " << worst
              << (worst <= 1e-9 ? "  [ok]\n" : "  [FAIL]\n");
    bool ok = worst <= 1e-9;

    if (const auto* ell = dynamic_cast<const ahb::EllipticProblem*>(&prob)) {
        double lo = 1e30, hi = 0.0;
        for (int k = 0; k < 5; ++k) {
            ahb::GridVector c = bundle.truth;
            ahb::GridVector h = prob.zero_parameter();
            h.values = rng.vector(h.size());
            const auto rep = ahb::elliptic_derivative_check(*ell, c, h);
            lo = std::min(lo, rep.ratio);
            hi = std::max(hi, rep.ratio);
        }
        const bool in_range = lo >= 3.5 && hi <= 4.5;
        std::cout << "derivative Taylor-remainder ratio range: [" << lo << ", " << hi << "]"
                  << (in_range ? "  [ok]\n" : "  [FAIL]\n");
        ok = ok && in_range;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive heavy-ball and Landweber-type iterative regularization harness"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> jobs, max_iter;

    std::string config_path;
    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("--config", config_path, "path to a JSON experiment config")->required();
    run->add_option("--seed", seed, "override the noise seed");
    run->add_option("--out", out_dir, "override the output directory");
    run->add_option("--jobs", jobs, "run this many solves in parallel");
    run->add_option("--max-iter", max_iter, "override every method's iteration cap");

    auto* list = app.add_subcommand("list-problems", "list built-in problems and methods");

    std::string check_path;
    auto* check = app.add_subcommand("check", "validate a config and run problem self-tests");
    check->add_option("--config", check_path, "path to a JSON experiment config")->required();

    bool curves = false;
    auto* t1 = app.add_subcommand("reproduce-table1", "Fredholm equation benchmark sweep");
    t1->add_option("--seed", seed, "noise seed");
    t1->add_option("--out", out_dir, "output directory");
    t1->add_flag("--curves", curves, "also emit convergence-curve files");

    bool full_scale = false;
    auto* t2 = app.add_subcommand("reproduce-table2", "tomography benchmark sweep (desk scale)");
    t2->add_option("--seed", seed, "noise seed");
    t2->add_option("--out", out_dir, "output directory");
    t2->add_option("--jobs", jobs, "parallel runs");
    t2->add_flag("--full", full_scale, "full-scale geometry (256x256, 60 angles, fan beam)");

    auto* t3 = app.add_subcommand("reproduce-table3", "elliptic identification benchmark sweep");
    t3->add_option("--seed", seed, "noise seed");
    t3->add_option("--out", out_dir, "output directory");
    t3->add_option("--jobs", jobs, "parallel runs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = ahb::ExperimentConfig::from_json_file(config_path);
            apply_overrides(cfg, seed, out_dir, jobs, max_iter);
            return finish(ahb::run_experiment(cfg));
        }
        if (list->parsed()) {
            std::cout << "problems:\n"
                      << "  fredholm  first-kind integral equation on [0,1], trapezoidal grid\n"
                      << "            (n_nodes; linear, quadratic or TV regularizer n/a: 1-D)\n"
                      << "  tomo      2-D line-integral tomography, Shepp-Logan phantom\n"
                      << "            (rows, cols, n_angles, n_rays, geometry=parallel|fan)\n"
                      << "  elliptic  coefficient identification in -Lap u + c u = f\n"
                      << "            (grid, eta; nonlinear)\n"
                      << "methods:\n"
                      << "  landweber  dual gradient iteration, constant or adaptive step\n"
                      << "  ahb        heavy-ball variant with adaptive momentum\n"
                      << "  nu         Brakhage nu-method (linear + quadratic only)\n"
                      << "  nesterov   Nesterov-accelerated Landweber (linear + quadratic only)\n"
                      << "regularizers:\n"
                      << "  quadratic     R(x) = ||x||^2 / 2\n"
                      << "  tv_quadratic  R(x) = ||x||_F^2/(2 kappa) + TV(x) (2-D problems)\n";
            return 0;
        }
        if (check->parsed()) {
            auto cfg = ahb::ExperimentConfig::from_json_file(check_path);
            std::cout << "config ok: " << check_path << "\n";
            bool ok = true;
            for (const auto& m : cfg.methods) {
                const std::string reason = cfg.unsupported_reason(m);
                if (!reason.empty()) {
                    std::cout << "unsupported: " << reason << "\n";
                    ok = false;
                }
            }
            ok = self_test(cfg) && ok;
            return ok ? 0 : 2;
        }
        if (t1->parsed()) {
            auto cfg = ahb::table1_config();
            cfg.output.curves = curves;
            apply_overrides(cfg, seed, out_dir, jobs, max_iter);
            return finish(ahb::run_experiment(cfg));
        }
        if (t2->parsed()) {
            auto cfg = ahb::table2_config(20240802u, full_scale ? "out/table2_full" : "out/table2",
                                          full_scale);
            apply_overrides(cfg, seed, out_dir, jobs, max_iter);
            return finish(ahb::run_experiment(cfg));
        }
        if (t3->parsed()) {
            auto cfg = ahb::table3_config();
            apply_overrides(cfg, seed, out_dir, jobs, max_iter);
            return finish(ahb::run_experiment(cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
