#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ahb/problems/tomography.hpp"
#include "ahb/solver.hpp"

namespace ahb {

struct ProblemSpec {
    std::string name;  // fredholm | tomo | elliptic
    // fredholm
    int n_nodes = 1000;
    // tomo
    int rows = 64, cols = 64;
    int n_angles = 30, n_rays = 95;
    TomoGeometry geometry = TomoGeometry::Parallel;
    // elliptic
    int grid = 64;
    double eta = 0.01;

    bool is_linear() const { return name != "elliptic"; }
    /// relative for fredholm/tomo, absolute for elliptic (the convention the
    /// corresponding result tables use)
    ErrorMode error_mode() const {
        return name == "elliptic" ? ErrorMode::Absolute : ErrorMode::Relative;
    }
};

struct RegularizerSpec {
    std::string name;  // quadratic | tv_quadratic
    double kappa = 1.0;
    int pdhg_iters = 70;
};

struct MethodSpec {
    std::string name;   // ahb | landweber | nu | nesterov
    std::string label;  // row label; defaults to the name
    SolverConfig solver;
    // nu-method / Nesterov extras; gamma = gamma_scale / L^2
    double nu = 3.0;
    double alpha_shift = 3.0;
    double gamma_scale = 0.99;

    const std::string& display() const { return label.empty() ? name : label; }
};

struct NoiseSpec {
    enum class Kind { Absolute, Relative };
    Kind kind = Kind::Absolute;
    std::vector<double> levels;
    std::uint64_t seed = 1;
    int repeats = 1;
};

struct OutputSpec {
    std::string dir = "out";
    bool iteration_logs = true;
    bool timing = true;  // false writes zeros, making reruns byte-identical
    bool curves = false;
    std::optional<double> curves_delta;  // defaults to the first noise level
    int curves_exact_iters = 1000;
    bool write_images = false;
    bool write_system_matrix = false;
};

struct ExperimentConfig {
    ProblemSpec problem;
    RegularizerSpec regularizer;
    std::vector<MethodSpec> methods;
    NoiseSpec noise;
    OutputSpec output;
    int jobs = 1;

    /// Structural validation (values, names). Method/regularizer/problem
    /// support is checked per method by supported(); run_experiment skips
    /// unsupported combinations and reports them.
    void validate() const;

    /// Empty if the method can run on this problem/regularizer combination,
    /// otherwise the reason it cannot.
    std::string unsupported_reason(const MethodSpec& m) const;

    static ExperimentConfig from_json_file(const std::filesystem::path& path);
    static ExperimentConfig from_json_text(const std::string& text);
};

}  // namespace ahb
