#include "ahb/solver.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "ahb/operator_norm.hpp"
#include "ahb/stopping.hpp"

namespace ahb {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Discrepancy: return "discrepancy";
        case StopReason::MaxIter: return "max_iter";
        case StopReason::ExactZeroResidual: return "exact_zero_residual";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (tau <= 1.0) throw std::invalid_argument("SolverConfig: tau must be > 1");
    if (beta_cap < 0.0) throw std::invalid_argument("SolverConfig: beta_cap must be >= 0");
    if (mu0 <= 0.0) throw std::invalid_argument("SolverConfig: mu0 must be positive");
    if (mu1 <= 0.0) throw std::invalid_argument("SolverConfig: mu1 must be positive");
    if (eta < 0.0 || eta >= 1.0) throw std::invalid_argument("SolverConfig: eta must be in [0,1)");
    if (max_iter <= 0) throw std::invalid_argument("SolverConfig: max_iter must be positive");
    if (l_bound && *l_bound <= 0.0)
        throw std::invalid_argument("SolverConfig: l_bound must be positive");
}

double step_size(const GridVector& r, const GridVector& g, const SolverConfig& cfg,
                 double l_bound) {
    if (cfg.step_rule == StepRule::Constant) {
        if (l_bound <= 0.0)
            throw std::invalid_argument("step_size: constant rule needs a positive norm bound");
        return cfg.mu0 / (l_bound * l_bound);
    }
    const double g2 = norm_sq(g);
    if (g2 == 0.0) return cfg.mu1;
    return std::min(cfg.mu0 * norm_sq(r) / g2, cfg.mu1);
}

double gamma_tilde_update(const GridVector& m, const GridVector& x_cur, const GridVector& x_prev,
                          double alpha_prev, double r_prev_norm, double beta_prev,
                          double gamma_prev, double eta, double delta) {
    GridVector dx = x_cur;
    dx.values -= x_prev.values;
    return inner(m, dx) - (1.0 - eta) * alpha_prev * r_prev_norm * r_prev_norm +
           (1.0 + eta) * alpha_prev * delta * r_prev_norm + beta_prev * gamma_prev;
}

double momentum_coefficient(double alpha, const GridVector& g, const GridVector& m,
                            double gamma_tilde, double sigma, double beta_cap) {
    const double m2 = norm_sq(m);
    if (m2 == 0.0) return 0.0;
    const double raw = (alpha * inner(g, m) - 2.0 * sigma * gamma_tilde) / m2;
    return std::min(std::max(0.0, raw), beta_cap);
}

namespace {

double truth_error_of(const GridVector& x, const std::optional<TruthInfo>& truth) {
    if (!truth) return std::numeric_limits<double>::quiet_NaN();
    GridVector d = x;
    d.values -= truth->x_true.values;
    const double e = norm(d);
    if (truth->mode == ErrorMode::Relative) return e / norm(truth->x_true);
    return e;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Shared driver for the heavy-ball loop and its momentum-free special case.
// landweber_solve uses use_momentum = false, which never forms m or the
// surrogate; ahb_solve with beta_cap = 0 reaches the same update expression
// xi - alpha g because a zero beta skips the momentum term entirely, so the
// two produce bitwise-identical iterates.
SolveResult run_dual_iteration(const ForwardProblem& prob, const Regularizer& reg,
                               const GridVector& y_delta, double delta, const GridVector& xi0,
                               const SolverConfig& cfg, const std::optional<TruthInfo>& truth,
                               const IterationObserver& observer, bool use_momentum) {
    cfg.validate();
    if (delta < 0.0) throw std::invalid_argument("solve: delta must be >= 0");

    const double sigma = reg.sigma();
    RunRecord rec;
    rec.c0 = cfg.feasibility_constant(sigma);
    if (use_momentum && cfg.beta_cap != 0.0 && rec.c0 <= 0.0)
        std::cerr << "[ahb] warning: c0 = " << rec.c0
                  << " <= 0; the descent/termination hypotheses do not hold\n";

    double l_bound = cfg.l_bound.value_or(0.0);
    if (cfg.step_rule == StepRule::Constant && l_bound <= 0.0) {
        if (prob.norm_bound())
            l_bound = *prob.norm_bound();
        else
            l_bound = estimate_operator_norm(prob, reg.conj_grad(xi0), 100, 20240601u);
    }

    SolverState st;
    st.xi_prev = xi0;
    st.xi_cur = xi0;
    st.x_cur = reg.conj_grad(xi0);
    st.x_prev = st.x_cur;
    if (!prob.domain_check(st.x_cur))
        throw SolverError("solve: initial guess lies outside the problem domain");

    const StoppingRule rule(cfg.tau, delta, cfg.max_iter);
    const auto t0 = Clock::now();

    for (st.n = 0;; ++st.n) {
        GridVector r = prob.apply(st.x_cur);
        r.values -= y_delta.values;
        const double rn = norm(r);

        IterationRow row{st.n, rn, 0.0, 0.0, 0.0,
                         cfg.record_truth_error ? truth_error_of(st.x_cur, truth)
                                                : std::numeric_limits<double>::quiet_NaN(),
                         seconds_since(t0)};

        if (rule.satisfied(rn)) {
            rec.rows.push_back(row);
            if (delta > 0.0) {
                rec.stop_reason = StopReason::Discrepancy;
                rec.n_delta = st.n;
            } else {
                rec.stop_reason = StopReason::ExactZeroResidual;
            }
            break;
        }
        if (st.n == rule.max_iter) {
            rec.rows.push_back(row);
            rec.stop_reason = StopReason::MaxIter;
            break;
        }

        const GridVector g = prob.lin_adjoint(st.x_cur, r);
        if (cfg.step_rule == StepRule::Adaptive && norm_sq(g) == 0.0)
            throw SolverError(
                "solve: zero gradient with nonzero residual at n = " + std::to_string(st.n) +
                "; the residual is orthogonal to the operator range and the iteration cannot "
                "progress");
        const double alpha = step_size(r, g, cfg, l_bound);

        double beta = 0.0;
        if (use_momentum) {
            GridVector m = st.xi_cur;
            m.values -= st.xi_prev.values;
            if (st.n >= 1)
                st.gamma_tilde = gamma_tilde_update(m, st.x_cur, st.x_prev, st.alpha_prev,
                                                    st.r_prev_norm, st.beta_prev, st.gamma_tilde,
                                                    cfg.eta, delta);
            beta = momentum_coefficient(alpha, g, m, st.gamma_tilde, sigma, cfg.beta_cap);

            row.alpha = alpha;
            row.beta = beta;
            row.gamma_tilde = st.gamma_tilde;
            rec.rows.push_back(row);
            if (observer)
                observer(IterationView{st.n, st.x_cur, st.x_prev, st.xi_cur, st.xi_prev, rn, alpha,
                                       beta, st.gamma_tilde});

            GridVector xi_next = st.xi_cur;
            xi_next.values -= alpha * g.values;
            if (beta != 0.0) xi_next.values += beta * m.values;
            st.xi_prev = std::move(st.xi_cur);
            st.xi_cur = std::move(xi_next);
        } else {
            row.alpha = alpha;
            rec.rows.push_back(row);
            if (observer)
                observer(IterationView{st.n, st.x_cur, st.x_prev, st.xi_cur, st.xi_prev, rn, alpha,
                                       0.0, 0.0});

            GridVector xi_next = st.xi_cur;
            xi_next.values -= alpha * g.values;
            st.xi_prev = std::move(st.xi_cur);
            st.xi_cur = std::move(xi_next);
        }

        st.x_prev = std::move(st.x_cur);
        st.x_cur = reg.conj_grad(st.xi_cur);
        if (!prob.domain_check(st.x_cur))
            throw SolverError("solve: iterate left the problem domain at n = " +
                              std::to_string(st.n + 1));

        st.alpha_prev = alpha;
        st.beta_prev = beta;
        st.r_prev_norm = rn;
    }

    return SolveResult{std::move(st.x_cur), std::move(rec)};
}

}  // namespace

SolveResult ahb_solve(const ForwardProblem& prob, const Regularizer& reg,
                      const GridVector& y_delta, double delta, const GridVector& xi0,
                      const SolverConfig& cfg, const std::optional<TruthInfo>& truth,
                      const IterationObserver& observer) {
    return run_dual_iteration(prob, reg, y_delta, delta, xi0, cfg, truth, observer, true);
}

SolveResult landweber_solve(const ForwardProblem& prob, const Regularizer& reg,
                            const GridVector& y_delta, double delta, const GridVector& xi0,
                            const SolverConfig& cfg, const std::optional<TruthInfo>& truth,
                            const IterationObserver& observer) {
    return run_dual_iteration(prob, reg, y_delta, delta, xi0, cfg, truth, observer, false);
}

SolveResult nu_method_solve(const ForwardProblem& prob, const GridVector& y_delta, double delta,
                            const NuMethodConfig& cfg, const std::optional<TruthInfo>& truth) {
    if (!prob.is_linear())
        throw std::invalid_argument("nu_method_solve: only linear problems are supported");
    if (cfg.nu <= 0.5) throw std::invalid_argument("nu_method_solve: nu must be > 1/2");
    if (cfg.gamma <= 0.0) throw std::invalid_argument("nu_method_solve: gamma must be positive");
    if (cfg.tau <= 1.0) throw std::invalid_argument("nu_method_solve: tau must be > 1");
    if (delta < 0.0) throw std::invalid_argument("nu_method_solve: delta must be >= 0");

    RunRecord rec;
    const double nu = cfg.nu;
    GridVector x = prob.zero_parameter();
    GridVector x_prev = x;
    const StoppingRule rule(cfg.tau, delta, cfg.max_iter);
    const auto t0 = Clock::now();

    for (int n = 0;; ++n) {
        GridVector r = prob.apply(x);
        r.values -= y_delta.values;
        const double rn = norm(r);

        const double alpha =
            4.0 * (2.0 * n + 2.0 * nu + 1.0) * (n + nu) / ((n + 2.0 * nu) * (2.0 * n + 4.0 * nu + 1.0));
        const double beta = n * (2.0 * n - 1.0) * (2.0 * n + 2.0 * nu + 1.0) /
                            ((n + 2.0 * nu) * (2.0 * n + 4.0 * nu + 1.0) * (2.0 * n + 2.0 * nu - 1.0));

        rec.rows.push_back(IterationRow{n, rn, alpha, beta, 0.0, truth_error_of(x, truth),
                                        seconds_since(t0)});
        if (rule.satisfied(rn)) {
            if (delta > 0.0) {
                rec.stop_reason = StopReason::Discrepancy;
                rec.n_delta = n;
            } else {
                rec.stop_reason = StopReason::ExactZeroResidual;
            }
            break;
        }
        if (n == rule.max_iter) {
            rec.stop_reason = StopReason::MaxIter;
            break;
        }

        const GridVector g = prob.lin_adjoint(x, r);
        GridVector x_next = x;
        x_next.values += -alpha * cfg.gamma * g.values + beta * (x.values - x_prev.values);
        x_prev = std::move(x);
        x = std::move(x_next);
    }

    return SolveResult{std::move(x), std::move(rec)};
}

SolveResult nesterov_solve(const ForwardProblem& prob, const GridVector& y_delta, double delta,
                           const NesterovConfig& cfg, const std::optional<TruthInfo>& truth) {
    if (!prob.is_linear())
        throw std::invalid_argument("nesterov_solve: only linear problems are supported");
    if (cfg.alpha_shift < 2.0)
        throw std::invalid_argument("nesterov_solve: alpha_shift must be >= 2");
    if (cfg.gamma <= 0.0) throw std::invalid_argument("nesterov_solve: gamma must be positive");
    if (cfg.tau <= 1.0) throw std::invalid_argument("nesterov_solve: tau must be > 1");
    if (delta < 0.0) throw std::invalid_argument("nesterov_solve: delta must be >= 0");

    RunRecord rec;
    rec.forward_applies_per_iter = 2;  // one for the z-update, one for the discrepancy check
    GridVector x = prob.zero_parameter();
    GridVector x_prev = x;
    const StoppingRule rule(cfg.tau, delta, cfg.max_iter);
    const auto t0 = Clock::now();

    for (int n = 0;; ++n) {
        GridVector r = prob.apply(x);
        r.values -= y_delta.values;
        const double rn = norm(r);
        const double weight = (n - 1.0) / (n + cfg.alpha_shift);

        rec.rows.push_back(IterationRow{n, rn, cfg.gamma, weight, 0.0, truth_error_of(x, truth),
                                        seconds_since(t0)});
        if (rule.satisfied(rn)) {
            if (delta > 0.0) {
                rec.stop_reason = StopReason::Discrepancy;
                rec.n_delta = n;
            } else {
                rec.stop_reason = StopReason::ExactZeroResidual;
            }
            break;
        }
        if (n == rule.max_iter) {
            rec.stop_reason = StopReason::MaxIter;
            break;
        }

        GridVector z = x;
        z.values += weight * (x.values - x_prev.values);
        GridVector rz = prob.apply(z);
        rz.values -= y_delta.values;
        const GridVector g = prob.lin_adjoint(z, rz);
        GridVector x_next = z;
        x_next.values -= cfg.gamma * g.values;
        x_prev = std::move(x);
        x = std::move(x_next);
    }

    return SolveResult{std::move(x), std::move(rec)};
}

}  // namespace ahb
