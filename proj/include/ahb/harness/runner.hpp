#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "ahb/harness/config.hpp"
#include "ahb/regularizer.hpp"

namespace ahb {

/// One summary line per (method, noise level, repeat), mirroring the result
/// tables: noise level, iterations, wall time, terminal error.
struct SummaryRow {
    double level;  // configured level (absolute delta, or relative level)
    double delta;  // absolute noise level actually used
    std::string method;
    int iterations = 0;
    double seconds = 0.0;
    double error = std::numeric_limits<double>::quiet_NaN();
    StopReason stop_reason = StopReason::MaxIter;
    std::uint64_t seed = 0;
};

struct RunOutput {
    SummaryRow summary;
    RunRecord record;
};

struct ExperimentResult {
    std::vector<RunOutput> runs;          // level-major, then method, then repeat
    std::vector<std::string> skipped;     // unsupported combinations, with reasons
    bool all_discrepancy = false;         // every run stopped by the discrepancy principle
    std::filesystem::path summary_path;
};

struct ProblemBundle {
    std::shared_ptr<ForwardProblem> problem;
    GridVector truth;
    GridVector exact_data;
};

/// Instantiates the configured problem with its known truth and exact data.
ProblemBundle build_problem(const ProblemSpec& spec);

/// Fresh regularizer instance (TV instances carry per-run warm-start state).
std::shared_ptr<Regularizer> make_regularizer(const RegularizerSpec& spec,
                                              const ProblemSpec& problem);

/// Executes the full sweep: all (method, level, repeat) combinations, each
/// deterministic in the configured seed. Writes one summary file plus one
/// per-iteration log per run under output.dir; optionally convergence curves
/// (noisy and exact-data) and reconstruction images. Unsupported
/// combinations are skipped and reported.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes two-column (n, error) series from per-iteration records: the noisy
/// run and, when given, the exact-data run. Curves are omitted with a
/// warning when no truth errors were recorded.
void emit_convergence_curves(const std::filesystem::path& dir, const std::string& label,
                             const RunRecord& noisy, const RunRecord* exact);

/// Built-in configurations mirroring the three experiment tables.
ExperimentConfig table1_config(std::uint64_t seed = 20240801u,
                               const std::string& out_dir = "out/table1", bool curves = false);
ExperimentConfig table2_config(std::uint64_t seed = 20240802u,
                               const std::string& out_dir = "out/table2",
                               bool full_scale = false);
ExperimentConfig table3_config(std::uint64_t seed = 20240803u,
                               const std::string& out_dir = "out/table3");

/// Aligned text rendering of the summary (one row per run).
std::string render_summary(const std::vector<RunOutput>& runs, bool with_time = true);

}  // namespace ahb
