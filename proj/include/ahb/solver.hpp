#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahb/forward_problem.hpp"
#include "ahb/grid_vector.hpp"
#include "ahb/regularizer.hpp"

namespace ahb {

enum class StepRule { Constant, Adaptive };

enum class StopReason { Discrepancy, MaxIter, ExactZeroResidual };

std::string to_string(StopReason r);

/// Thrown when an iteration cannot continue (iterate left the problem
/// domain, or the adaptive step stalled on a zero gradient).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double tau = 1.01;                                        // discrepancy factor, > 1
    double beta_cap = std::numeric_limits<double>::infinity();// momentum cap; 0 collapses to Landweber
    double mu0 = 1.0;
    double mu1 = 1.0;
    double eta = 0.0;                                         // tangential-cone constant
    StepRule step_rule = StepRule::Constant;
    int max_iter = 100000;
    bool record_truth_error = true;
    std::optional<double> l_bound;  // ||L|| bound for the constant rule; estimated when absent

    void validate() const;

    /// c0 = 1 - (1+eta)/tau - eta - mu0/(4 sigma). Positive c0 is the
    /// feasibility hypothesis of the descent and termination results; a
    /// nonpositive value triggers a warning, not a failure.
    double feasibility_constant(double sigma) const {
        return 1.0 - (1.0 + eta) / tau - eta - mu0 / (4.0 * sigma);
    }
};

struct IterationRow {
    int n;
    double residual_norm;
    double alpha;
    double beta;
    double gamma_tilde;
    double truth_error;  // NaN when no truth was supplied
    double elapsed_seconds;
};

struct RunRecord {
    std::vector<IterationRow> rows;
    StopReason stop_reason = StopReason::MaxIter;
    int n_delta = -1;  // set iff stop_reason == Discrepancy
    double c0 = std::numeric_limits<double>::quiet_NaN();
    int forward_applies_per_iter = 1;

    int final_n() const { return rows.empty() ? -1 : rows.back().n; }
};

/// Dual-iterate state of the heavy-ball loop.
struct SolverState {
    GridVector xi_prev, xi_cur;
    GridVector x_prev, x_cur;
    double gamma_tilde = 0.0;
    double alpha_prev = 0.0;
    double beta_prev = 0.0;
    double r_prev_norm = 0.0;
    int n = 0;
};

enum class ErrorMode { Relative, Absolute };

struct TruthInfo {
    GridVector x_true;
    ErrorMode mode = ErrorMode::Relative;
};

/// Per-iteration view handed to an optional observer, for invariant checks
/// that need the internal iterates. Fires once per non-terminal iteration,
/// after all scalars of step n are known and before the update.
struct IterationView {
    int n;
    const GridVector& x_cur;
    const GridVector& x_prev;
    const GridVector& xi_cur;
    const GridVector& xi_prev;
    double residual_norm;
    double alpha;
    double beta;
    double gamma_tilde;
};

using IterationObserver = std::function<void(const IterationView&)>;

struct SolveResult {
    GridVector x;
    RunRecord record;
};

/// Step-size rules: Constant gives mu0 / L^2; Adaptive gives
/// min{ mu0 ||r||^2 / ||g||^2, mu1 } and falls back to mu1 when g = 0.
double step_size(const GridVector& r, const GridVector& g, const SolverConfig& cfg,
                 double l_bound);

/// Surrogate recursion for n >= 1 (the n = 0 value is 0 by definition):
///
///   <m, x_cur - x_prev> - (1-eta) alpha_prev ||r_prev||^2
///       + (1+eta) alpha_prev delta ||r_prev|| + beta_prev gamma_prev.
double gamma_tilde_update(const GridVector& m, const GridVector& x_cur, const GridVector& x_prev,
                          double alpha_prev, double r_prev_norm, double beta_prev,
                          double gamma_prev, double eta, double delta);

/// Momentum coefficient min{ max{0, (alpha <g,m> - 2 sigma gamma_tilde) / ||m||^2 }, beta_cap },
/// exactly 0 when m = 0. Clamp comparisons are exact.
double momentum_coefficient(double alpha, const GridVector& g, const GridVector& m,
                            double gamma_tilde, double sigma, double beta_cap);

/// Adaptive heavy-ball iteration on the dual variable,
///
///   xi_{n+1} = xi_n - alpha_n L(x_n)^*(F(x_n) - y_delta) + beta_n (xi_n - xi_{n-1}),
///   x_{n+1}  = conj_grad(xi_{n+1}),
///
/// stopped by the discrepancy principle ||r_n|| <= tau delta. delta = 0 runs
/// the exact-data variant: the gamma recursion loses its delta term and the
/// loop only stops on an exactly zero residual or at max_iter.
SolveResult ahb_solve(const ForwardProblem& prob, const Regularizer& reg,
                      const GridVector& y_delta, double delta, const GridVector& xi0,
                      const SolverConfig& cfg, const std::optional<TruthInfo>& truth = {},
                      const IterationObserver& observer = {});

/// Landweber-type iteration: the same loop without the momentum term.
SolveResult landweber_solve(const ForwardProblem& prob, const Regularizer& reg,
                            const GridVector& y_delta, double delta, const GridVector& xi0,
                            const SolverConfig& cfg, const std::optional<TruthInfo>& truth = {},
                            const IterationObserver& observer = {});

struct NuMethodConfig {
    double nu = 3.0;      // > 1/2
    double gamma = 1.0;   // in (0, 1/||A||^2)
    double tau = 1.01;
    int max_iter = 100000;
};

/// Brakhage's nu-method (linear problems, quadratic regularizer only):
///
///   x_{n+1} = x_n - alpha_n gamma A^*(A x_n - y_delta) + beta_n (x_n - x_{n-1})
///
/// with x_{-1} = x_0 = 0 and the Jacobi-polynomial coefficients
///   alpha_n = 4 (2n+2nu+1)(n+nu) / ((n+2nu)(2n+4nu+1)),
///   beta_n  = n (2n-1)(2n+2nu+1) / ((n+2nu)(2n+4nu+1)(2n+2nu-1)).
SolveResult nu_method_solve(const ForwardProblem& prob, const GridVector& y_delta, double delta,
                            const NuMethodConfig& cfg, const std::optional<TruthInfo>& truth = {});

struct NesterovConfig {
    double alpha_shift = 3.0;  // >= 2
    double gamma = 1.0;        // in (0, 1/||A||^2)
    double tau = 1.01;
    int max_iter = 100000;
};

/// Nesterov-accelerated Landweber (linear, quadratic regularizer):
///
///   z_n = x_n + (n-1)/(n+alpha_shift) (x_n - x_{n-1}),
///   x_{n+1} = z_n - gamma A^*(A z_n - y_delta),
///
/// with the discrepancy principle checked on the x-iterate residual, which
/// costs a second operator application per step.
SolveResult nesterov_solve(const ForwardProblem& prob, const GridVector& y_delta, double delta,
                           const NesterovConfig& cfg, const std::optional<TruthInfo>& truth = {});

}  // namespace ahb
