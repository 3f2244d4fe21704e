#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ahb/harness/runner.hpp"

using namespace ahb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("ahb_harness_" + tag);
    fs::remove_all(dir);
    return dir;
}

// small Fredholm sweep with all four methods
ExperimentConfig small_config(const fs::path& out) {
    ExperimentConfig cfg = table1_config(4242, out.string(), false);
    cfg.problem.n_nodes = 80;
    cfg.noise.levels = {0.1, 0.05};
    cfg.output.timing = false;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad values") {
    const std::string good = R"({
      "problem": {"name": "fredholm", "n_nodes": 50},
      "regularizer": {"name": "quadratic"},
      "methods": [{"name": "landweber", "tau": 1.01, "step_rule": "constant", "mu0": 1.0}],
      "noise": {"type": "absolute", "levels": [0.1], "seed": 1}
    })";
    CHECK_NOTHROW(ExperimentConfig::from_json_text(good));

    // unknown keys are errors, at every level
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({
      "problem": {"name": "fredholm", "nodes": 50},
      "regularizer": {"name": "quadratic"},
      "methods": [{"name": "landweber"}],
      "noise": {"type": "absolute", "levels": [0.1]}
    })"));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({
      "problem": {"name": "fredholm"},
      "regularizer": {"name": "quadratic"},
      "methods": [{"name": "landweber", "step": "constant"}],
      "noise": {"type": "absolute", "levels": [0.1]}
    })"));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({"problem": {"name": "fredholm"}})"));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({
      "problem": {"name": "unknown_problem"},
      "regularizer": {"name": "quadratic"},
      "methods": [{"name": "landweber"}],
      "noise": {"type": "absolute", "levels": [0.1]}
    })"));
    // beta_cap accepts "inf"
    const std::string inf_cfg = R"({
      "problem": {"name": "fredholm", "n_nodes": 50},
      "regularizer": {"name": "quadratic"},
      "methods": [{"name": "ahb", "beta_cap": "inf", "step_rule": "constant", "mu0": 0.019}],
      "noise": {"type": "absolute", "levels": [0.1]}
    })";
    const auto cfg = ExperimentConfig::from_json_text(inf_cfg);
    CHECK(std::isinf(cfg.methods[0].solver.beta_cap));
}

TEST_CASE("experiment produces one summary row per (method, level, repeat)") {
    const fs::path out = scratch_dir("cardinality");
    ExperimentConfig cfg = small_config(out);
    const ExperimentResult result = run_experiment(cfg);
    CHECK(result.runs.size() == 4 * 2);  // 4 methods x 2 levels
    CHECK(result.skipped.empty());
    CHECK(result.all_discrepancy);
    for (const auto& r : result.runs) CHECK(r.summary.stop_reason == StopReason::Discrepancy);
    // iteration counts match the final log row
    for (const auto& r : result.runs) CHECK(r.summary.iterations == r.record.final_n());
    fs::remove_all(out);
}

TEST_CASE("reruns with identical seeds reproduce files byte-for-byte") {
    const fs::path out1 = scratch_dir("repro1");
    const fs::path out2 = scratch_dir("repro2");
    ExperimentConfig cfg1 = small_config(out1);
    ExperimentConfig cfg2 = small_config(out2);
    run_experiment(cfg1);
    run_experiment(cfg2);

    std::vector<fs::path> names;
    for (const auto& e : fs::directory_iterator(out1)) names.push_back(e.path().filename());
    REQUIRE(!names.empty());
    for (const auto& name : names) CHECK(slurp(out1 / name) == slurp(out2 / name));
    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("repeats draw distinct noise but stay deterministic") {
    const fs::path out = scratch_dir("repeats");
    ExperimentConfig cfg = small_config(out);
    cfg.noise.levels = {0.1};
    cfg.methods = {cfg.methods[0]};  // landweber only
    cfg.noise.repeats = 3;
    const ExperimentResult r1 = run_experiment(cfg);
    CHECK(r1.runs.size() == 3);
    CHECK(r1.runs[0].summary.seed + 1 == r1.runs[1].summary.seed);
    bool any_differs = false;
    for (int i = 1; i < 3; ++i)
        if (r1.runs[i].summary.error != r1.runs[0].summary.error) any_differs = true;
    CHECK(any_differs);

    const ExperimentResult r2 = run_experiment(cfg);
    for (int i = 0; i < 3; ++i) {
        CHECK(r1.runs[i].summary.error == r2.runs[i].summary.error);
        CHECK(r1.runs[i].summary.iterations == r2.runs[i].summary.iterations);
    }
    fs::remove_all(out);
}

TEST_CASE("unsupported combinations are skipped and flagged") {
    const fs::path out = scratch_dir("skip");
    ExperimentConfig cfg = small_config(out);
    cfg.regularizer.name = "tv_quadratic";  // fredholm is 1-D: nothing can run TV here
    cfg.regularizer.kappa = 1.0;
    const std::string reason = cfg.unsupported_reason(cfg.methods[0]);
    CHECK(!reason.empty());
    fs::remove_all(out);
}

TEST_CASE("nu and nesterov are rejected on nonlinear or non-quadratic setups") {
    ExperimentConfig cfg;
    cfg.problem.name = "elliptic";
    cfg.regularizer.name = "quadratic";
    MethodSpec nu;
    nu.name = "nu";
    CHECK(!cfg.unsupported_reason(nu).empty());
    cfg.problem.name = "tomo";
    CHECK(cfg.unsupported_reason(nu).empty());
    cfg.regularizer.name = "tv_quadratic";
    CHECK(!cfg.unsupported_reason(nu).empty());
}

TEST_CASE("convergence curves copy the truth-error column verbatim") {
    const fs::path out = scratch_dir("curves");
    ExperimentConfig cfg = small_config(out);
    cfg.methods = {cfg.methods[0], cfg.methods[3]};  // landweber + ahb
    cfg.noise.levels = {0.05};
    cfg.output.curves = true;
    cfg.output.curves_exact_iters = 40;
    const ExperimentResult result = run_experiment(cfg);

    for (const auto& run : result.runs) {
        const fs::path curve = out / ("curve_noisy_" + run.summary.method + ".csv");
        REQUIRE(fs::exists(curve));
        std::ifstream in(curve);
        std::string header;
        std::getline(in, header);
        CHECK(header == "n,error");
        int n;
        char comma;
        double err;
        std::size_t row = 0;
        while (in >> n >> comma >> err) {
            REQUIRE(row < run.record.rows.size());
            CHECK(n == run.record.rows[row].n);
            CHECK(err == doctest::Approx(run.record.rows[row].truth_error).epsilon(1e-15));
            ++row;
        }
        CHECK(row == run.record.rows.size());

        // exact-data curve exists and spans the configured horizon
        const fs::path exact = out / ("curve_exact_" + run.summary.method + ".csv");
        REQUIRE(fs::exists(exact));
        std::ifstream ein(exact);
        std::getline(ein, header);
        std::size_t count = 0;
        while (std::getline(ein, header))
            if (!header.empty()) ++count;
        CHECK(count == 41);  // n = 0..40, no discrepancy stop at delta = 0
    }
    fs::remove_all(out);
}

TEST_CASE("tomography sweep writes images and the system matrix") {
    const fs::path out = scratch_dir("tomo");
    ExperimentConfig cfg;
    cfg.problem.name = "tomo";
    cfg.problem.rows = cfg.problem.cols = 16;
    cfg.problem.n_angles = 12;
    cfg.problem.n_rays = 23;
    cfg.regularizer.name = "tv_quadratic";
    cfg.regularizer.kappa = 1.0;
    cfg.regularizer.pdhg_iters = 20;
    MethodSpec lw;
    lw.name = "landweber";
    lw.solver.tau = 1.05;
    lw.solver.step_rule = StepRule::Adaptive;
    lw.solver.mu0 = 0.99 * (2.0 - 2.0 / 1.05);
    lw.solver.mu1 = 100.0;
    cfg.methods = {lw};
    cfg.noise.kind = NoiseSpec::Kind::Relative;
    cfg.noise.levels = {0.05};
    cfg.noise.seed = 77;
    cfg.output.dir = out.string();
    cfg.output.write_images = true;
    cfg.output.write_system_matrix = true;

    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.all_discrepancy);
    CHECK(fs::exists(out / "truth.pgm"));
    CHECK(fs::exists(out / "truth.csv"));
    CHECK(fs::exists(out / "recon_landweber_d0.05_r0.pgm"));
    CHECK(fs::exists(out / "system_matrix.coo"));

    std::ifstream coo(out / "system_matrix.coo");
    std::string header;
    std::getline(coo, header);
    CHECK(header == "row,col,value");
    std::ifstream pgm(out / "truth.pgm");
    std::getline(pgm, header);
    CHECK(header == "P2");
    fs::remove_all(out);
}

TEST_CASE("elliptic sweep terminates by discrepancy with the absolute error convention") {
    const fs::path out = scratch_dir("elliptic");
    ExperimentConfig cfg = table3_config(9, out.string());
    cfg.problem.grid = 16;
    cfg.regularizer.pdhg_iters = 50;
    cfg.noise.levels = {0.001};
    cfg.methods = {cfg.methods[0], cfg.methods[1]};  // landweber + ahb 0.99
    cfg.output.write_images = false;
    const ExperimentResult res = run_experiment(cfg);
    REQUIRE(res.runs.size() == 2);
    CHECK(res.all_discrepancy);
    // absolute errors: comparable to ||c||_{L2}, far below the relative scale
    for (const auto& r : res.runs) {
        CHECK(r.summary.error > 0.0);
        CHECK(r.summary.error < 1.0);
    }
    CHECK(res.runs[1].summary.iterations <= res.runs[0].summary.iterations);
    fs::remove_all(out);
}

TEST_CASE("table configurations validate and stay feasible") {
    const ExperimentConfig t1 = table1_config();
    CHECK_NOTHROW(t1.validate());
    // AHB feasibility constant is positive for the quadratic regularizer
    for (const auto& m : t1.methods)
        if (m.name == "ahb") CHECK(m.solver.feasibility_constant(0.5) > 0.0);

    const ExperimentConfig t2 = table2_config();
    CHECK_NOTHROW(t2.validate());
    for (const auto& m : t2.methods)
        CHECK(m.solver.feasibility_constant(0.5 / 1.0) > 0.0);  // sigma = 1/(2 kappa), kappa = 1

    const ExperimentConfig t3 = table3_config();
    CHECK_NOTHROW(t3.validate());
    for (const auto& m : t3.methods)
        CHECK(m.solver.feasibility_constant(0.5 / 10.0) > 0.0);  // kappa = 10
}
