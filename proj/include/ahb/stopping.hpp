#pragma once

#include <stdexcept>

namespace ahb {

/// Discrepancy principle: stop at the first iterate with ||r|| <= tau * delta.
/// With delta = 0 the rule only fires on an exactly zero residual; the
/// max_iter cap guards runs whose termination hypotheses do not hold.
struct StoppingRule {
    double tau;
    double delta;
    int max_iter;

    StoppingRule(double tau_, double delta_, int max_iter_ = 100000)
        : tau(tau_), delta(delta_), max_iter(max_iter_) {
        if (tau <= 1.0) throw std::invalid_argument("StoppingRule: tau must be > 1");
        if (delta < 0.0) throw std::invalid_argument("StoppingRule: delta must be >= 0");
        if (max_iter <= 0) throw std::invalid_argument("StoppingRule: max_iter must be positive");
    }

    bool satisfied(double residual_norm) const { return residual_norm <= tau * delta; }
};

}  // namespace ahb
