#include "ahb/harness/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ahb/io.hpp"
#include "ahb/noise.hpp"
#include "ahb/operator_norm.hpp"
#include "ahb/problems/elliptic.hpp"
#include "ahb/problems/fredholm.hpp"
#include "ahb/problems/tomography.hpp"
#include "ahb/regularizers.hpp"

namespace ahb {

namespace {

constexpr std::uint64_t kNormSeed = 20240601u;

std::string fmt_ms(double seconds, bool timing) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", timing ? seconds : 0.0);
    return buf;
}

std::string error_cell(double e) {
    return std::isnan(e) ? std::string() : io::format_double(e);
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void write_iteration_log(const std::filesystem::path& path, const RunRecord& rec, bool timing) {
    std::ofstream out = open_out(path);
    out << "n,residual_norm,alpha,beta,gamma_tilde,truth_error,time_s\n";
    for (const auto& r : rec.rows)
        out << r.n << ',' << io::format_double(r.residual_norm) << ','
            << io::format_double(r.alpha) << ',' << io::format_double(r.beta) << ','
            << io::format_double(r.gamma_tilde) << ',' << error_cell(r.truth_error) << ','
            << fmt_ms(r.elapsed_seconds, timing) << '\n';
    out << "# stop_reason," << to_string(rec.stop_reason) << '\n';
    if (rec.n_delta >= 0) out << "# n_delta," << rec.n_delta << '\n';
}

void write_summary(const std::filesystem::path& path, const std::vector<RunOutput>& runs,
                   bool timing) {
    std::ofstream out = open_out(path);
    out << "level,delta,method,iterations,time_s,error,stop_reason,seed\n";
    for (const auto& r : runs)
        out << io::format_double(r.summary.level) << ',' << io::format_double(r.summary.delta)
            << ',' << r.summary.method << ',' << r.summary.iterations << ','
            << fmt_ms(r.summary.seconds, timing) << ',' << error_cell(r.summary.error) << ','
            << to_string(r.summary.stop_reason) << ',' << r.summary.seed << '\n';
}

struct RunTask {
    std::size_t index;      // position in the result vector
    int level_index;
    int repeat;
    const MethodSpec* method;
};

}  // namespace

ProblemBundle build_problem(const ProblemSpec& spec) {
    if (spec.name == "fredholm") {
        FredholmSetup s = build_fredholm(spec.n_nodes);
        return ProblemBundle{s.problem, std::move(s.truth), std::move(s.exact_data)};
    }
    if (spec.name == "tomo") {
        TomoSetup s = build_tomo(spec.rows, spec.cols, spec.n_angles, spec.n_rays, spec.geometry);
        return ProblemBundle{s.problem, std::move(s.truth), std::move(s.exact_data)};
    }
    if (spec.name == "elliptic") {
        EllipticSetup s = build_elliptic(spec.grid, default_elliptic_parameter(spec.grid));
        s.problem->set_eta(spec.eta);
        return ProblemBundle{s.problem, std::move(s.truth), std::move(s.exact_data)};
    }
    throw std::invalid_argument("build_problem: unknown problem '" + spec.name + "'");
}

std::shared_ptr<Regularizer> make_regularizer(const RegularizerSpec& spec,
                                              const ProblemSpec& problem) {
    if (spec.name == "quadratic") return std::make_shared<QuadraticReg>();
    if (spec.name == "tv_quadratic") {
        int rows = 0, cols = 0;
        if (problem.name == "tomo") {
            rows = problem.rows;
            cols = problem.cols;
        } else if (problem.name == "elliptic") {
            rows = problem.grid;
            cols = problem.grid;
        } else {
            throw std::invalid_argument("tv_quadratic needs a 2-D pixel grid");
        }
        return std::make_shared<TvQuadraticReg>(spec.kappa, rows, cols, spec.pdhg_iters);
    }
    throw std::invalid_argument("make_regularizer: unknown regularizer '" + spec.name + "'");
}

void emit_convergence_curves(const std::filesystem::path& dir, const std::string& label,
                             const RunRecord& noisy, const RunRecord* exact) {
    auto has_truth = [](const RunRecord& r) {
        for (const auto& row : r.rows)
            if (!std::isnan(row.truth_error)) return true;
        return false;
    };
    auto write_curve = [&](const std::filesystem::path& path, const RunRecord& rec) {
        std::ofstream out = open_out(path);
        out << "n,error\n";
        for (const auto& row : rec.rows)
            if (!std::isnan(row.truth_error))
                out << row.n << ',' << io::format_double(row.truth_error) << '\n';
    };
    if (!has_truth(noisy)) {
        std::cerr << "[ahb] warning: no truth errors recorded for '" << label
                  << "'; curve omitted\n";
        return;
    }
    write_curve(dir / ("curve_noisy_" + label + ".csv"), noisy);
    if (exact) {
        if (has_truth(*exact))
            write_curve(dir / ("curve_exact_" + label + ".csv"), *exact);
        else
            std::cerr << "[ahb] warning: no truth errors in the exact-data run of '" << label
                      << "'; curve omitted\n";
    }
}

namespace {

RunOutput execute_run(const ExperimentConfig& cfg, const ProblemBundle& shared,
                      const MethodSpec& method, double level, double delta,
                      const GridVector& y_delta, std::uint64_t seed, double l_bound, int repeat,
                      bool write_images, int max_iter_override = -1) {
    // Elliptic runs get a private problem instance so the factorization
    // cache is never shared between concurrent runs.
    ProblemBundle local;
    const ProblemBundle* bundle = &shared;
    if (cfg.problem.name == "elliptic" && cfg.jobs > 1) {
        local = build_problem(cfg.problem);
        bundle = &local;
    }
    const ForwardProblem& prob = *bundle->problem;
    const TruthInfo truth{bundle->truth, cfg.problem.error_mode()};

    RunOutput out;
    out.summary.level = level;
    out.summary.delta = delta;
    out.summary.method = method.display();
    out.summary.seed = seed;

    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    if (method.name == "ahb" || method.name == "landweber") {
        SolverConfig solver = method.solver;
        if (solver.step_rule == StepRule::Constant && !solver.l_bound) solver.l_bound = l_bound;
        if (max_iter_override > 0) solver.max_iter = max_iter_override;
        const GridVector xi0 = prob.zero_parameter();
        auto reg = make_regularizer(cfg.regularizer, cfg.problem);
        res = method.name == "ahb"
                  ? ahb_solve(prob, *reg, y_delta, delta, xi0, solver, truth)
                  : landweber_solve(prob, *reg, y_delta, delta, xi0, solver, truth);
    } else if (method.name == "nu") {
        NuMethodConfig nu{method.nu, method.gamma_scale / (l_bound * l_bound), method.solver.tau,
                          max_iter_override > 0 ? max_iter_override : method.solver.max_iter};
        res = nu_method_solve(prob, y_delta, delta, nu, truth);
    } else {
        NesterovConfig nes{method.alpha_shift, method.gamma_scale / (l_bound * l_bound),
                           method.solver.tau,
                           max_iter_override > 0 ? max_iter_override : method.solver.max_iter};
        res = nesterov_solve(prob, y_delta, delta, nes, truth);
    }
    out.summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    out.summary.iterations = res.record.final_n();
    out.summary.stop_reason = res.record.stop_reason;
    out.summary.error = res.record.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                : res.record.rows.back().truth_error;
    out.record = std::move(res.record);

    // reconstruction images for the 2-D problems
    if (write_images && cfg.output.write_images && cfg.problem.name != "fredholm") {
        const int rows = cfg.problem.name == "tomo" ? cfg.problem.rows : cfg.problem.grid;
        const int cols = cfg.problem.name == "tomo" ? cfg.problem.cols : cfg.problem.grid;
        const Eigen::Map<const Eigen::MatrixXd> img(res.x.values.data(), rows, cols);
        const double lo = bundle->truth.values.minCoeff();
        double hi = bundle->truth.values.maxCoeff();
        if (!(hi > lo)) hi = lo + 1.0;
        std::ostringstream name;
        name << "recon_" << method.display() << "_d" << io::format_double(level) << "_r" << repeat;
        io::write_pgm(std::filesystem::path(cfg.output.dir) / (name.str() + ".pgm"), img, lo, hi);
        io::write_image_csv(std::filesystem::path(cfg.output.dir) / (name.str() + ".csv"), img);
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;

    std::vector<const MethodSpec*> supported;
    for (const auto& m : cfg.methods) {
        const std::string reason = cfg.unsupported_reason(m);
        if (reason.empty())
            supported.push_back(&m);
        else
            result.skipped.push_back(reason);
    }
    for (const auto& s : result.skipped) std::cerr << "[ahb] skipping: " << s << '\n';

    const ProblemBundle bundle = build_problem(cfg.problem);
    const std::filesystem::path dir(cfg.output.dir);
    std::filesystem::create_directories(dir);

    // operator-norm bound, shared by every run that needs one
    double l_bound = 0.0;
    const bool needs_norm = [&] {
        for (const auto* m : supported)
            if (m->name == "nu" || m->name == "nesterov" ||
                m->solver.step_rule == StepRule::Constant)
                return true;
        return false;
    }();
    if (needs_norm)
        l_bound = bundle.problem->norm_bound().value_or(estimate_operator_norm(
            *bundle.problem, bundle.problem->zero_parameter(), 100, kNormSeed));

    // noisy data per (level, repeat), shared across methods
    const int n_levels = static_cast<int>(cfg.noise.levels.size());
    struct NoisyData {
        GridVector y;
        double delta;
        std::uint64_t seed;
    };
    std::vector<NoisyData> data;
    data.reserve(static_cast<std::size_t>(n_levels) * cfg.noise.repeats);
    for (int li = 0; li < n_levels; ++li) {
        for (int rep = 0; rep < cfg.noise.repeats; ++rep) {
            const std::uint64_t seed = cfg.noise.seed + 1000ull * li + rep;
            const double level = cfg.noise.levels[li];
            if (cfg.noise.kind == NoiseSpec::Kind::Absolute) {
                data.push_back({add_noise_exact(bundle.exact_data, level, seed), level, seed});
            } else {
                auto [y, delta] = add_noise_relative(bundle.exact_data, level, seed);
                data.push_back({std::move(y), delta, seed});
            }
        }
    }

    std::vector<RunTask> tasks;
    for (int li = 0; li < n_levels; ++li)
        for (const auto* m : supported)
            for (int rep = 0; rep < cfg.noise.repeats; ++rep)
                tasks.push_back(RunTask{tasks.size(), li, rep, m});
    result.runs.resize(tasks.size());

    auto run_task = [&](const RunTask& t) {
        const NoisyData& nd = data[static_cast<std::size_t>(t.level_index) * cfg.noise.repeats +
                                   t.repeat];
        RunOutput out = execute_run(cfg, bundle, *t.method, cfg.noise.levels[t.level_index],
                                    nd.delta, nd.y, nd.seed, l_bound, t.repeat, true);
        if (cfg.output.iteration_logs) {
            std::ostringstream name;
            name << "iters_" << t.method->display() << "_d"
                 << io::format_double(cfg.noise.levels[t.level_index]) << "_r" << t.repeat
                 << ".csv";
            write_iteration_log(dir / name.str(), out.record, cfg.output.timing);
        }
        result.runs[t.index] = std::move(out);
    };

    if (cfg.jobs <= 1) {
        for (const auto& t : tasks) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        const int workers = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    run_task(tasks[i]);
            });
        for (auto& th : pool) th.join();
    }

    // convergence curves: one noisy run per method plus an exact-data run
    if (cfg.output.curves) {
        const double cd = cfg.output.curves_delta.value_or(cfg.noise.levels.front());
        int li = 0;
        for (int i = 0; i < n_levels; ++i)
            if (cfg.noise.levels[i] == cd) li = i;
        for (const auto* m : supported) {
            const RunOutput* noisy = nullptr;
            for (const auto& r : result.runs)
                if (r.summary.method == m->display() && r.summary.level == cfg.noise.levels[li]) {
                    noisy = &r;
                    break;
                }
            if (!noisy) continue;
            RunOutput exact = execute_run(cfg, bundle, *m, 0.0, 0.0, bundle.exact_data,
                                          cfg.noise.seed, l_bound, 0, false,
                                          cfg.output.curves_exact_iters);
            emit_convergence_curves(dir, m->display(), noisy->record, &exact.record);
        }
    }

    if (cfg.output.write_images && cfg.problem.name != "fredholm") {
        const int rows = cfg.problem.name == "tomo" ? cfg.problem.rows : cfg.problem.grid;
        const Eigen::Map<const Eigen::MatrixXd> truth_img(bundle.truth.values.data(), rows,
                                                          static_cast<int>(bundle.truth.size()) / rows);
        const double lo = bundle.truth.values.minCoeff();
        double hi = bundle.truth.values.maxCoeff();
        if (!(hi > lo)) hi = lo + 1.0;
        io::write_pgm(dir / "truth.pgm", truth_img, lo, hi);
        io::write_image_csv(dir / "truth.csv", truth_img);
    }
    if (cfg.output.write_system_matrix && cfg.problem.name == "tomo") {
        const auto* tomo = dynamic_cast<const TomoProblem*>(bundle.problem.get());
        if (tomo) io::write_coo(dir / "system_matrix.coo", tomo->system_matrix());
    }

    result.summary_path = dir / "summary.csv";
    write_summary(result.summary_path, result.runs, cfg.output.timing);

    result.all_discrepancy = result.skipped.empty();
    for (const auto& r : result.runs)
        if (r.summary.stop_reason != StopReason::Discrepancy) result.all_discrepancy = false;
    return result;
}

ExperimentConfig table1_config(std::uint64_t seed, const std::string& out_dir, bool curves) {
    ExperimentConfig cfg;
    cfg.problem.name = "fredholm";
    cfg.problem.n_nodes = 1000;
    cfg.regularizer.name = "quadratic";

    const double tau = 1.01;
    MethodSpec landweber;
    landweber.name = "landweber";
    landweber.solver.tau = tau;
    landweber.solver.step_rule = StepRule::Constant;
    landweber.solver.mu0 = 1.0;  // alpha = 1 / ||F||^2

    MethodSpec nu;
    nu.name = "nu";
    nu.solver.tau = tau;
    nu.nu = 3.0;
    nu.gamma_scale = 0.99;

    MethodSpec nesterov;
    nesterov.name = "nesterov";
    nesterov.solver.tau = tau;
    nesterov.alpha_shift = 3.0;
    nesterov.gamma_scale = 0.99;

    MethodSpec ahb;
    ahb.name = "ahb";
    ahb.solver.tau = tau;
    ahb.solver.step_rule = StepRule::Constant;
    ahb.solver.mu0 = 0.99 * (2.0 - 2.0 / tau);
    ahb.solver.beta_cap = std::numeric_limits<double>::infinity();

    cfg.methods = {landweber, nu, nesterov, ahb};
    cfg.noise.kind = NoiseSpec::Kind::Absolute;
    cfg.noise.levels = {0.1, 0.01, 0.001, 0.0001, 0.00001};
    cfg.noise.seed = seed;
    cfg.output.dir = out_dir;
    cfg.output.curves = curves;
    cfg.output.curves_delta = 0.001;
    cfg.output.curves_exact_iters = 1000;
    return cfg;
}

ExperimentConfig table2_config(std::uint64_t seed, const std::string& out_dir, bool full_scale) {
    ExperimentConfig cfg;
    cfg.problem.name = "tomo";
    if (full_scale) {
        cfg.problem.rows = cfg.problem.cols = 256;
        cfg.problem.n_angles = 60;
        cfg.problem.n_rays = 367;
    } else {
        cfg.problem.rows = cfg.problem.cols = 64;
        cfg.problem.n_angles = 30;
        cfg.problem.n_rays = 95;
    }
    cfg.problem.geometry = full_scale ? TomoGeometry::Fan : TomoGeometry::Parallel;
    cfg.regularizer.name = "tv_quadratic";
    cfg.regularizer.kappa = 1.0;
    cfg.regularizer.pdhg_iters = 70;

    const double tau = 1.05;
    const double mu0 = 0.99 * (2.0 - 2.0 / tau) / cfg.regularizer.kappa;
    MethodSpec landweber;
    landweber.name = "landweber";
    landweber.solver.tau = tau;
    landweber.solver.step_rule = StepRule::Adaptive;
    landweber.solver.mu0 = mu0;
    landweber.solver.mu1 = 100.0;

    MethodSpec ahb99 = landweber;
    ahb99.name = "ahb";
    ahb99.label = "ahb_beta0.99";
    ahb99.solver.beta_cap = 0.99;

    MethodSpec ahbinf = ahb99;
    ahbinf.label = "ahb_betainf";
    ahbinf.solver.beta_cap = std::numeric_limits<double>::infinity();

    cfg.methods = {landweber, ahb99, ahbinf};
    cfg.noise.kind = NoiseSpec::Kind::Relative;
    cfg.noise.levels = {0.05, 0.01, 0.005, 0.001};
    cfg.noise.seed = seed;
    cfg.output.dir = out_dir;
    cfg.output.write_images = true;
    return cfg;
}

ExperimentConfig table3_config(std::uint64_t seed, const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.problem.name = "elliptic";
    cfg.problem.grid = 64;
    cfg.problem.eta = 0.01;
    cfg.regularizer.name = "tv_quadratic";
    cfg.regularizer.kappa = 10.0;
    cfg.regularizer.pdhg_iters = 200;

    const double tau = 1.05, eta = cfg.problem.eta;
    const double mu0 = 1.96 * (1.0 - eta - (1.0 + eta) / tau) / cfg.regularizer.kappa;
    MethodSpec landweber;
    landweber.name = "landweber";
    landweber.solver.tau = tau;
    landweber.solver.step_rule = StepRule::Adaptive;
    landweber.solver.mu0 = mu0;
    landweber.solver.mu1 = 80.0;
    landweber.solver.eta = eta;

    MethodSpec ahb99 = landweber;
    ahb99.name = "ahb";
    ahb99.label = "ahb_beta0.99";
    ahb99.solver.beta_cap = 0.99;

    MethodSpec ahbinf = ahb99;
    ahbinf.label = "ahb_betainf";
    ahbinf.solver.beta_cap = std::numeric_limits<double>::infinity();

    cfg.methods = {landweber, ahb99, ahbinf};
    cfg.noise.kind = NoiseSpec::Kind::Absolute;
    cfg.noise.levels = {0.005, 0.001, 0.0005, 0.0001, 0.00005};
    cfg.noise.seed = seed;
    cfg.output.dir = out_dir;
    cfg.output.write_images = true;
    return cfg;
}

std::string render_summary(const std::vector<RunOutput>& runs, bool with_time) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %-16s %10s %10s %14s  %s\n", "level", "method",
                  "iters", with_time ? "time(s)" : "", "error", "stop");
    os << line;
    for (const auto& r : runs) {
        std::snprintf(line, sizeof(line), "%-10s %-16s %10d %10.3f %14s  %s\n",
                      io::format_double(r.summary.level).c_str(), r.summary.method.c_str(),
                      r.summary.iterations, with_time ? r.summary.seconds : 0.0,
                      error_cell(r.summary.error).c_str(), to_string(r.summary.stop_reason).c_str());
        os << line;
    }
    return os.str();
}

}  // namespace ahb
