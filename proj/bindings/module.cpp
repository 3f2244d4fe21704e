#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ahb/harness/runner.hpp"
#include "ahb/noise.hpp"
#include "ahb/operator_norm.hpp"
#include "ahb/problems/elliptic.hpp"
#include "ahb/problems/fredholm.hpp"
#include "ahb/problems/tomography.hpp"
#include "ahb/regularizers.hpp"
#include "ahb/solver.hpp"
#include "ahb/tv.hpp"

namespace py = pybind11;
using namespace ahb;

namespace {

Eigen::VectorXd column(const std::vector<IterationRow>& rows, double IterationRow::*field) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) v[static_cast<Eigen::Index>(i)] = rows[i].*field;
    return v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive heavy-ball iterative regularization for ill-posed inverse problems";

    py::class_<GridVector>(m, "GridVector")
        .def(py::init<Eigen::VectorXd, Eigen::VectorXd>(), py::arg("values"), py::arg("weights"))
        .def_readwrite("values", &GridVector::values)
        .def_readwrite("weights", &GridVector::weights)
        .def("__len__", [](const GridVector& v) { return v.size(); });
    m.def("euclidean", &euclidean, py::arg("values"));
    m.def("inner", &inner);
    m.def("norm", [](const GridVector& v) { return norm(v); });

    m.def("add_noise_exact", &add_noise_exact, py::arg("y"), py::arg("delta"), py::arg("seed"));
    m.def("add_noise_relative", &add_noise_relative, py::arg("y"), py::arg("delta_rel"),
          py::arg("seed"));

    py::class_<ForwardProblem, std::shared_ptr<ForwardProblem>>(m, "ForwardProblem")
        .def("apply", &ForwardProblem::apply)
        .def("lin_apply", &ForwardProblem::lin_apply)
        .def("lin_adjoint", &ForwardProblem::lin_adjoint)
        .def("domain_check", &ForwardProblem::domain_check)
        .def("eta", &ForwardProblem::eta)
        .def("is_linear", &ForwardProblem::is_linear)
        .def("name", &ForwardProblem::name)
        .def("zero_parameter", &ForwardProblem::zero_parameter)
        .def("zero_data", &ForwardProblem::zero_data);

    m.def("estimate_operator_norm", &estimate_operator_norm, py::arg("problem"), py::arg("x"),
          py::arg("iters"), py::arg("seed"));

    py::class_<Regularizer, std::shared_ptr<Regularizer>>(m, "Regularizer")
        .def("value", &Regularizer::value)
        .def("conj_grad", &Regularizer::conj_grad)
        .def("sigma", &Regularizer::sigma);
    py::class_<QuadraticReg, Regularizer, std::shared_ptr<QuadraticReg>>(m, "QuadraticReg")
        .def(py::init<>());
    py::class_<TvQuadraticReg, Regularizer, std::shared_ptr<TvQuadraticReg>>(m, "TvQuadraticReg")
        .def(py::init<double, Eigen::Index, Eigen::Index, int>(), py::arg("kappa"),
             py::arg("rows"), py::arg("cols"), py::arg("pdhg_iters"))
        .def("reset_warm_start", &TvQuadraticReg::reset_warm_start);
    m.def("bregman_distance", &bregman_distance, py::arg("reg"), py::arg("xi"), py::arg("x"),
          py::arg("z"));

    m.def("discrete_gradient", [](const Eigen::MatrixXd& x) {
        GradientField g = discrete_gradient(x);
        return py::make_tuple(g.du, g.dv);
    });
    m.def("discrete_divergence", [](const Eigen::MatrixXd& du, const Eigen::MatrixXd& dv) {
        return discrete_divergence(GradientField{du, dv});
    });
    m.def("tv_value", &tv_value);
    m.def("pdhg_denoise",
          py::overload_cast<const Eigen::MatrixXd&, double, int>(&pdhg_denoise), py::arg("b"),
          py::arg("kappa"), py::arg("iters"));

    py::enum_<StepRule>(m, "StepRule")
        .value("Constant", StepRule::Constant)
        .value("Adaptive", StepRule::Adaptive);
    py::enum_<ErrorMode>(m, "ErrorMode")
        .value("Relative", ErrorMode::Relative)
        .value("Absolute", ErrorMode::Absolute);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("tau", &SolverConfig::tau)
        .def_readwrite("beta_cap", &SolverConfig::beta_cap)
        .def_readwrite("mu0", &SolverConfig::mu0)
        .def_readwrite("mu1", &SolverConfig::mu1)
        .def_readwrite("eta", &SolverConfig::eta)
        .def_readwrite("step_rule", &SolverConfig::step_rule)
        .def_readwrite("max_iter", &SolverConfig::max_iter)
        .def_readwrite("l_bound", &SolverConfig::l_bound)
        .def("feasibility_constant", &SolverConfig::feasibility_constant);

    py::class_<RunRecord>(m, "RunRecord")
        .def_property_readonly("stop_reason",
                               [](const RunRecord& r) { return to_string(r.stop_reason); })
        .def_readonly("n_delta", &RunRecord::n_delta)
        .def_readonly("c0", &RunRecord::c0)
        .def_property_readonly("iterations", &RunRecord::final_n)
        .def_property_readonly(
            "residual_norms",
            [](const RunRecord& r) { return column(r.rows, &IterationRow::residual_norm); })
        .def_property_readonly(
            "alphas", [](const RunRecord& r) { return column(r.rows, &IterationRow::alpha); })
        .def_property_readonly(
            "betas", [](const RunRecord& r) { return column(r.rows, &IterationRow::beta); })
        .def_property_readonly(
            "gamma_tildes",
            [](const RunRecord& r) { return column(r.rows, &IterationRow::gamma_tilde); })
        .def_property_readonly(
            "truth_errors",
            [](const RunRecord& r) { return column(r.rows, &IterationRow::truth_error); });

    auto wrap_truth = [](const std::optional<GridVector>& truth, ErrorMode mode)
        -> std::optional<TruthInfo> {
        if (!truth) return std::nullopt;
        return TruthInfo{*truth, mode};
    };

    m.def(
        "ahb_solve",
        [wrap_truth](const ForwardProblem& prob, const Regularizer& reg, const GridVector& y,
                     double delta, const GridVector& xi0, const SolverConfig& cfg,
                     const std::optional<GridVector>& truth, ErrorMode mode) {
            SolveResult r = ahb_solve(prob, reg, y, delta, xi0, cfg, wrap_truth(truth, mode));
            return py::make_tuple(r.x, r.record);
        },
        py::arg("problem"), py::arg("reg"), py::arg("y_delta"), py::arg("delta"), py::arg("xi0"),
        py::arg("config"), py::arg("truth") = std::nullopt,
        py::arg("error_mode") = ErrorMode::Relative);
    m.def(
        "landweber_solve",
        [wrap_truth](const ForwardProblem& prob, const Regularizer& reg, const GridVector& y,
                     double delta, const GridVector& xi0, const SolverConfig& cfg,
                     const std::optional<GridVector>& truth, ErrorMode mode) {
            SolveResult r = landweber_solve(prob, reg, y, delta, xi0, cfg, wrap_truth(truth, mode));
            return py::make_tuple(r.x, r.record);
        },
        py::arg("problem"), py::arg("reg"), py::arg("y_delta"), py::arg("delta"), py::arg("xi0"),
        py::arg("config"), py::arg("truth") = std::nullopt,
        py::arg("error_mode") = ErrorMode::Relative);
    m.def(
        "nu_method_solve",
        [wrap_truth](const ForwardProblem& prob, const GridVector& y, double delta, double nu,
                     double gamma, double tau, int max_iter,
                     const std::optional<GridVector>& truth, ErrorMode mode) {
            SolveResult r = nu_method_solve(prob, y, delta, NuMethodConfig{nu, gamma, tau, max_iter},
                                            wrap_truth(truth, mode));
            return py::make_tuple(r.x, r.record);
        },
        py::arg("problem"), py::arg("y_delta"), py::arg("delta"), py::arg("nu"), py::arg("gamma"),
        py::arg("tau") = 1.01, py::arg("max_iter") = 100000, py::arg("truth") = std::nullopt,
        py::arg("error_mode") = ErrorMode::Relative);
    m.def(
        "nesterov_solve",
        [wrap_truth](const ForwardProblem& prob, const GridVector& y, double delta,
                     double alpha_shift, double gamma, double tau, int max_iter,
                     const std::optional<GridVector>& truth, ErrorMode mode) {
            SolveResult r = nesterov_solve(prob, y, delta,
                                           NesterovConfig{alpha_shift, gamma, tau, max_iter},
                                           wrap_truth(truth, mode));
            return py::make_tuple(r.x, r.record);
        },
        py::arg("problem"), py::arg("y_delta"), py::arg("delta"), py::arg("alpha_shift"),
        py::arg("gamma"), py::arg("tau") = 1.01, py::arg("max_iter") = 100000,
        py::arg("truth") = std::nullopt, py::arg("error_mode") = ErrorMode::Relative);

    m.def("fredholm_kernel", &fredholm_kernel);
    m.def("build_fredholm", [](int n) {
        FredholmSetup s = build_fredholm(n);
        return py::make_tuple(std::shared_ptr<ForwardProblem>(s.problem), s.truth, s.exact_data);
    });
    m.def("shepp_logan", &shepp_logan, py::arg("rows"), py::arg("cols"));
    py::enum_<TomoGeometry>(m, "TomoGeometry")
        .value("Parallel", TomoGeometry::Parallel)
        .value("Fan", TomoGeometry::Fan);
    m.def(
        "build_tomo",
        [](int rows, int cols, int n_angles, int n_rays, TomoGeometry geometry) {
            TomoSetup s = build_tomo(rows, cols, n_angles, n_rays, geometry);
            return py::make_tuple(std::shared_ptr<ForwardProblem>(s.problem), s.truth,
                                  s.exact_data);
        },
        py::arg("rows"), py::arg("cols"), py::arg("n_angles"), py::arg("n_rays"),
        py::arg("geometry") = TomoGeometry::Parallel);
    m.def("build_elliptic", [](int grid, const Eigen::MatrixXd& c_true) {
        EllipticSetup s = build_elliptic(grid, c_true);
        return py::make_tuple(std::shared_ptr<ForwardProblem>(s.problem), s.truth, s.exact_data);
    });
    m.def("default_elliptic_parameter", &default_elliptic_parameter);
}
