// Acceptance suite: runs the full benchmark reproduction and the analytic
// property checks, printing one PASS/FAIL line per criterion. Exits nonzero
// if any criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <vector>

#include "ahb/harness/runner.hpp"
#include "ahb/noise.hpp"
#include "ahb/problems/elliptic.hpp"
#include "ahb/problems/fredholm.hpp"
#include "ahb/problems/tomography.hpp"
#include "ahb/random.hpp"
#include "ahb/regularizers.hpp"
#include "ahb/solver.hpp"
#include "ahb/tv.hpp"

using namespace ahb;
namespace fs = std::filesystem;

namespace {

struct Failure {
    std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

constexpr std::uint64_t kSeed = 20240801u;

struct Table1Expected {
    const char* method;
    double iters[5];
    double errors[5];
};

// iteration counts and relative errors of the reference implementation
const double kDeltas[5] = {0.1, 0.01, 0.001, 0.0001, 0.00001};
const Table1Expected kTable1[4] = {
    {"landweber", {62, 190, 1256, 8144, 55145},
     {1.9024e-2, 5.0988e-3, 1.8305e-3, 6.2937e-4, 1.9023e-4}},
    {"nu", {15, 30, 82, 215, 565}, {1.6657e-2, 5.1081e-3, 1.8587e-3, 6.4159e-4, 1.9305e-4}},
    {"nesterov", {16, 41, 102, 324, 817},
     {1.7684e-2, 4.1816e-3, 1.7776e-3, 5.1961e-4, 1.7054e-4}},
    {"ahb", {20, 30, 80, 268, 896}, {1.7774e-2, 4.6982e-3, 1.7220e-3, 6.1130e-4, 1.8902e-4}},
};

const RunOutput* find_run(const ExperimentResult& result, const std::string& method,
                          double level) {
    for (const auto& r : result.runs)
        if (r.summary.method == method && r.summary.level == level) return &r;
    return nullptr;
}

// ---------------------------------------------------------------- criteria 1, 2, 5 (table 1)

ExperimentResult run_table1(const fs::path& out_dir) {
    ExperimentConfig cfg = table1_config(kSeed, (out_dir / "table1").string(), false);
    return run_experiment(cfg);
}

bool criterion1(const ExperimentResult& t1, std::string& detail) {
    bool ok = t1.skipped.empty() && t1.runs.size() == 20;  // 4 methods x 5 noise levels
    double worst_iter_dev = 0.0, worst_err_dev = 0.0;
    for (const auto& exp : kTable1) {
        for (int d = 0; d < 5; ++d) {
            const RunOutput* run = find_run(t1, exp.method, kDeltas[d]);
            if (!run) return false;
            const double iter_dev = std::abs(run->summary.iterations - exp.iters[d]) / exp.iters[d];
            const double err_dev = std::abs(run->summary.error - exp.errors[d]) / exp.errors[d];
            worst_iter_dev = std::max(worst_iter_dev, iter_dev);
            worst_err_dev = std::max(worst_err_dev, err_dev);
            if (iter_dev > 0.20 || err_dev > 0.30) {
                std::printf("    %s delta=%g: iters %d (ref %g, dev %.1f%%), err %g (ref %g, "
                            "dev %.1f%%)\n",
                            exp.method, kDeltas[d], run->summary.iterations, exp.iters[d],
                            100 * iter_dev, run->summary.error, exp.errors[d], 100 * err_dev);
                ok = false;
            }
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max iteration dev %.1f%%, max error dev %.1f%%",
                  100 * worst_iter_dev, 100 * worst_err_dev);
    detail = buf;
    return ok;
}

bool criterion2(const ExperimentResult& t1, std::string& detail) {
    bool ok = true;
    double worst = 0.0;
    for (int d = 0; d < 5; ++d) {
        const RunOutput* ahb = find_run(t1, "ahb", kDeltas[d]);
        const RunOutput* lw = find_run(t1, "landweber", kDeltas[d]);
        if (!ahb || !lw) return false;
        // AHB never needs more steps than Landweber at any level
        if (ahb->summary.iterations > lw->summary.iterations) ok = false;
        if (d == 0) continue;  // the 0.35 bound applies for delta <= 0.01
        const double ratio = static_cast<double>(ahb->summary.iterations) / lw->summary.iterations;
        worst = std::max(worst, ratio);
        if (ratio > 0.35) ok = false;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst AHB/Landweber ratio %.3f (bound 0.35)", worst);
    detail = buf;
    return ok;
}

// ------------------------------------------------------- criteria 3, 4 (descent + surrogate)

struct LemmaChecks {
    bool descent_ok = true;
    bool surrogate_ok = true;
    bool all_discrepancy = true;
    double worst_descent_violation = 0.0;
    double worst_surrogate_violation = 0.0;
    int runs = 0;
};

LemmaChecks run_lemma_checks() {
    LemmaChecks out;
    const FredholmSetup setup = build_fredholm(1000);
    QuadraticReg reg;
    SolverConfig cfg;
    cfg.tau = 1.01;
    cfg.step_rule = StepRule::Constant;
    cfg.mu0 = 0.99 * (2.0 - 2.0 / cfg.tau);
    cfg.beta_cap = std::numeric_limits<double>::infinity();
    const double c0 = cfg.feasibility_constant(reg.sigma());

    for (double delta : {0.01, 0.001, 0.0001}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const GridVector y_delta = add_noise_exact(setup.exact_data, delta, seed);
            double prev_bregman = 0.0, prev_decrement = 0.0;
            bool have_prev = false;
            SolveResult res = ahb_solve(
                *setup.problem, reg, y_delta, delta, setup.problem->zero_parameter(), cfg, {},
                [&](const IterationView& v) {
                    GridVector dx = v.x_cur;
                    dx.values -= setup.truth.values;
                    const double bregman = 0.5 * norm_sq(dx);
                    if (have_prev) {
                        const double viol = bregman - (prev_bregman - prev_decrement);
                        out.worst_descent_violation = std::max(out.worst_descent_violation, viol);
                        if (viol > 1e-9) out.descent_ok = false;
                    }
                    prev_bregman = bregman;
                    prev_decrement = c0 * v.alpha * v.residual_norm * v.residual_norm;
                    have_prev = true;

                    GridVector m = v.xi_cur;
                    m.values -= v.xi_prev.values;
                    const double gamma = inner(m, dx);
                    const double sviol = gamma - v.gamma_tilde;
                    out.worst_surrogate_violation = std::max(out.worst_surrogate_violation, sviol);
                    if (sviol > 1e-9) out.surrogate_ok = false;
                });
            // final transition into the terminal iterate
            GridVector dx = res.x;
            dx.values -= setup.truth.values;
            const double viol = 0.5 * norm_sq(dx) - (prev_bregman - prev_decrement);
            if (have_prev && viol > 1e-9) out.descent_ok = false;
            if (res.record.stop_reason != StopReason::Discrepancy) out.all_discrepancy = false;
            ++out.runs;
        }
    }
    return out;
}

// ------------------------------------------------------------------- criterion 6 (collapse)

bool criterion6(std::string& detail) {
    const FredholmSetup setup = build_fredholm(1000);
    QuadraticReg reg;
    SolverConfig cfg;
    cfg.tau = 1.01;
    cfg.step_rule = StepRule::Constant;
    cfg.mu0 = 1.0;
    cfg.beta_cap = 0.0;
    const double delta = 0.01;

    for (std::uint64_t seed : {101ull, 102ull, 103ull}) {
        const GridVector y_delta = add_noise_exact(setup.exact_data, delta, seed);
        std::vector<double> ra, rl;
        SolveResult a = ahb_solve(*setup.problem, reg, y_delta, delta,
                                  setup.problem->zero_parameter(), cfg, {},
                                  [&](const IterationView& v) { ra.push_back(v.residual_norm); });
        SolveResult l = landweber_solve(*setup.problem, reg, y_delta, delta,
                                        setup.problem->zero_parameter(), cfg, {},
                                        [&](const IterationView& v) { rl.push_back(v.residual_norm); });
        if (ra.size() != rl.size()) {
            detail = "iteration counts differ";
            return false;
        }
        for (std::size_t i = 0; i < ra.size(); ++i)
            if (ra[i] != rl[i]) {
                detail = "residual sequences differ at n = " + std::to_string(i);
                return false;
            }
        if ((a.x.values - l.x.values).cwiseAbs().maxCoeff() != 0.0) {
            detail = "terminal iterates differ";
            return false;
        }
    }
    detail = "3 seeds, residual sequences and terminal iterates bitwise equal";
    return true;
}

// ------------------------------------------------- criterion 7 (adjoints + derivative check)

bool criterion7(std::string& detail) {
    GaussianSampler rng(2024);
    double worst = 0.0;
    auto check_adjoint = [&](const ForwardProblem& prob, const GridVector& base) {
        for (int k = 0; k < 100; ++k) {
            GridVector h = prob.zero_parameter();
            GridVector w = prob.zero_data();
            h.values = rng.vector(h.size());
            w.values = rng.vector(w.size());
            const double lhs = inner(prob.lin_apply(base, h), w);
            const double rhs = inner(h, prob.lin_adjoint(base, w));
            worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + norm(h) * norm(w)));
        }
    };

    const FredholmSetup fred = build_fredholm(1000);
    check_adjoint(*fred.problem, fred.problem->zero_parameter());
    const TomoSetup tomo = build_tomo(64, 64, 30, 95, TomoGeometry::Parallel);
    check_adjoint(*tomo.problem, tomo.problem->zero_parameter());
    const EllipticSetup ell = build_elliptic(64, default_elliptic_parameter(64));
    check_adjoint(*ell.problem, ell.truth);
    const bool adjoints_ok = worst <= 1e-9;

    double lo = 1e300, hi = 0.0;
    for (int k = 0; k < 20; ++k) {
        GridVector c = ell.problem->zero_parameter();
        c.values = rng.vector(c.size()).cwiseAbs();
        GridVector dir = ell.problem->zero_parameter();
        dir.values = rng.vector(dir.size());
        const auto rep = elliptic_derivative_check(*ell.problem, c, dir);
        lo = std::min(lo, rep.ratio);
        hi = std::max(hi, rep.ratio);
    }
    const bool taylor_ok = lo >= 3.5 && hi <= 4.5;

    char buf[128];
    std::snprintf(buf, sizeof(buf), "max adjoint mismatch %.2e, Taylor ratios [%.3f, %.3f]", worst,
                  lo, hi);
    detail = buf;
    return adjoints_ok && taylor_ok;
}

// ------------------------------------------------------------- criterion 8 (PDHG vs oracle)

bool criterion8(std::string& detail) {
    GaussianSampler rng(88);
    double worst_gap = 0.0;
    bool prox_ok = true;
    const double kappa = 1.0;

    auto objective = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& b) {
        return (x - b).squaredNorm() / (2.0 * kappa) + tv_value(x);
    };

    for (int inst = 0; inst < 10; ++inst) {
        Eigen::MatrixXd b(3, 3);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) b(i, j) = rng.next();

        const Eigen::MatrixXd x = pdhg_denoise(b, kappa, 10000);
        const Eigen::MatrixXd x_ref = pdhg_denoise(b, kappa, 100000);
        const double gap = std::abs(objective(x, b) - objective(x_ref, b));
        worst_gap = std::max(worst_gap, gap);

        // prox optimality of the conjugate-gradient map at 10 comparison
        // points per instance (100 total)
        TvQuadraticReg reg(kappa, 3, 3, 10000);
        GridVector xi = euclidean(Eigen::Map<const Eigen::VectorXd>(b.data(), 9) / kappa);
        const GridVector xstar = reg.conj_grad(xi);
        const double fstar = reg.value(xstar) - inner(xi, xstar);
        for (int z = 0; z < 10; ++z) {
            GridVector zv = euclidean(rng.vector(9));
            if (fstar > reg.value(zv) - inner(xi, zv) + 1e-5) prox_ok = false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max objective gap %.2e (bound 1e-6), prox optimality %s",
                  worst_gap, prox_ok ? "holds" : "violated");
    detail = buf;
    return worst_gap <= 1e-6 && prox_ok;
}

// --------------------------------------------------- criterion 9 (tomography, qualitative)

bool criterion9(const fs::path& out_dir, std::string& detail) {
    ExperimentConfig cfg = table2_config(kSeed + 1, (out_dir / "tomo").string(), false);
    cfg.noise.levels = {0.05, 0.01};
    cfg.output.write_images = false;
    const ExperimentResult res = run_experiment(cfg);

    bool ok = res.skipped.empty();
    double worst_ratio = 0.0, worst_err_dev = 0.0;
    for (double level : cfg.noise.levels) {
        const RunOutput* lw = find_run(res, "landweber", level);
        if (!lw) return false;
        for (const char* label : {"ahb_beta0.99", "ahb_betainf"}) {
            const RunOutput* ahb = find_run(res, label, level);
            if (!ahb) return false;
            const double ratio = static_cast<double>(ahb->summary.iterations) /
                                 lw->summary.iterations;
            const double err_dev = std::abs(ahb->summary.error - lw->summary.error) /
                                   lw->summary.error;
            worst_ratio = std::max(worst_ratio, ratio);
            worst_err_dev = std::max(worst_err_dev, err_dev);
            if (ratio > 0.7 || err_dev > 0.15) {
                std::printf("    %s delta_rel=%g: iters %d vs landweber %d (ratio %.3f), error "
                            "%.4e vs %.4e (dev %.1f%%)\n",
                            label, level, ahb->summary.iterations, lw->summary.iterations, ratio,
                            ahb->summary.error, lw->summary.error, 100 * err_dev);
                ok = false;
            }
            if (ahb->summary.stop_reason != StopReason::Discrepancy) ok = false;
        }
        if (lw->summary.stop_reason != StopReason::Discrepancy) ok = false;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst iteration ratio %.3f (<= 0.7), worst error dev %.1f%% "
                  "(<= 15%%)",
                  worst_ratio, 100 * worst_err_dev);
    detail = buf;
    return ok;
}

// ----------------------------------------------------- criterion 10 (elliptic, qualitative)

bool criterion10(const fs::path& out_dir, std::string& detail) {
    ExperimentConfig cfg = table3_config(kSeed + 2, (out_dir / "elliptic").string());
    cfg.noise.levels = {0.001, 0.0001};
    cfg.methods = {cfg.methods[0], cfg.methods[1]};  // landweber + ahb beta = 0.99
    cfg.output.write_images = false;
    const ExperimentResult res = run_experiment(cfg);

    bool ok = res.skipped.empty();
    double worst_ratio = 0.0, worst_err_dev = 0.0;
    for (double level : cfg.noise.levels) {
        const RunOutput* lw = find_run(res, "landweber", level);
        const RunOutput* ahb = find_run(res, "ahb_beta0.99", level);
        if (!lw || !ahb) return false;
        const double ratio = static_cast<double>(ahb->summary.iterations) / lw->summary.iterations;
        const double err_dev = std::abs(ahb->summary.error - lw->summary.error) / lw->summary.error;
        worst_ratio = std::max(worst_ratio, ratio);
        worst_err_dev = std::max(worst_err_dev, err_dev);
        if (ratio > 0.5 || err_dev > 0.10) {
            std::printf("    delta=%g: iters %d vs landweber %d (ratio %.3f), error %.4e vs %.4e "
                        "(dev %.1f%%)\n",
                        level, ahb->summary.iterations, lw->summary.iterations, ratio,
                        ahb->summary.error, lw->summary.error, 100 * err_dev);
            ok = false;
        }
        if (lw->summary.stop_reason != StopReason::Discrepancy ||
            ahb->summary.stop_reason != StopReason::Discrepancy)
            ok = false;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst iteration ratio %.3f (<= 0.5), worst error dev %.1f%% "
                  "(<= 10%%)",
                  worst_ratio, 100 * worst_err_dev);
    detail = buf;
    return ok;
}

// --------------------------------------------------- criterion 11 (exact-data summability)

bool criterion11(std::string& detail) {
    const FredholmSetup setup = build_fredholm(1000);
    QuadraticReg reg;
    SolverConfig cfg;
    cfg.tau = 1.01;
    cfg.step_rule = StepRule::Constant;
    cfg.mu0 = 0.99 * (2.0 - 2.0 / cfg.tau);
    cfg.beta_cap = std::numeric_limits<double>::infinity();
    cfg.max_iter = 10000;

    SolveResult res = ahb_solve(*setup.problem, reg, setup.exact_data, 0.0,
                                setup.problem->zero_parameter(), cfg);
    const double c1 = 1.0 - cfg.mu0 / (4.0 * reg.sigma());
    const double bound = 0.5 * norm_sq(setup.truth) / c1;
    double partial = 0.0, worst = 0.0;
    for (const auto& row : res.record.rows) {
        partial += row.alpha * row.residual_norm * row.residual_norm;
        worst = std::max(worst, partial);
        if (partial > bound + 1e-6) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "partial sum %.6f exceeds bound %.6f at N = %d",
                          partial, bound, row.n);
            detail = buf;
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "sup of partial sums %.6f vs bound %.6f over 10^4 iterations",
                  worst, bound);
    detail = buf;
    return true;
}

}  // namespace

int main() {
    const fs::path out_dir = fs::temp_directory_path() / "ahb_acceptance";
    fs::remove_all(out_dir);
    fs::create_directories(out_dir);

    std::string detail;

    const ExperimentResult t1 = run_table1(out_dir);
    const bool c1 = criterion1(t1, detail);
    report(1, "Table 1 reproduction (iterations within 20%, errors within 30%)", c1, detail);

    const bool c2 = criterion2(t1, detail);
    report(2, "acceleration ratio: AHB <= 0.35x Landweber for delta <= 0.01", c2, detail);

    const LemmaChecks lemmas = run_lemma_checks();
    {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "worst violation %.2e over %d runs",
                      lemmas.worst_descent_violation, lemmas.runs);
        report(3, "monotone descent of the Bregman distance (5 seeds x 3 levels)",
               lemmas.descent_ok, buf);
        std::snprintf(buf, sizeof(buf), "worst violation %.2e over %d runs",
                      lemmas.worst_surrogate_violation, lemmas.runs);
        report(4, "surrogate dominance gamma_n <= gamma_tilde_n (same runs)", lemmas.surrogate_ok,
               buf);
    }

    bool c5 = lemmas.all_discrepancy && t1.all_discrepancy;
    for (const auto& r : t1.runs)
        if (r.summary.stop_reason != StopReason::Discrepancy) c5 = false;
    report(5, "finite termination: every noisy run stops by the discrepancy principle", c5);

    const bool c6 = criterion6(detail);
    report(6, "AHB with beta_cap = 0 equals Landweber bitwise (3 seeds)", c6, detail);

    const bool c7 = criterion7(detail);
    report(7, "adjoint consistency at 1e-9 and elliptic Taylor-remainder ratios", c7, detail);

    const bool c8 = criterion8(detail);
    report(8, "PDHG objective vs long-run reference and prox optimality", c8, detail);

    const bool c9 = criterion9(out_dir, detail);
    report(9, "tomography qualitative reproduction (iteration ratio and error parity)", c9,
           detail);

    const bool c10 = criterion10(out_dir, detail);
    report(10, "elliptic qualitative reproduction (iteration ratio and error parity)", c10,
           detail);

    const bool c11 = criterion11(detail);
    report(11, "exact-data summability bound over 10^4 iterations", c11, detail);

    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}
