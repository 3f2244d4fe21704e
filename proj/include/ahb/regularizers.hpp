#pragma once

#include "ahb/regularizer.hpp"
#include "ahb/tv.hpp"

namespace ahb {

/// R(x) = ||x||^2 / 2 in the space's weighted norm. conj_grad is the
/// identity and sigma = 1/2 exactly.
class QuadraticReg final : public Regularizer {
public:
    double value(const GridVector& x) const override { return 0.5 * norm_sq(x); }
    GridVector conj_grad(const GridVector& xi) const override { return xi; }
    double sigma() const override { return 0.5; }
};

/// R(x) = ||x||_F^2 / (2 kappa) + TV(x) on an I x J pixel grid, with the
/// isotropic total variation of tv_value(). The quadratic term and the TV
/// are Euclidean on the raw pixel values; kappa absorbs any grid scale.
///
/// conj_grad solves the total-variation denoising subproblem
///
///     argmin_x { ||x - kappa xi||_F^2 / (2 kappa) + TV(x) }
///
/// by pdhg_iters PDHG iterations. On a grid with uniform cell weight w this
/// is the conjugate-gradient map of the scaled functional w * R under the
/// weighted pairing, whose strong-convexity modulus in the weighted norm is
/// again sigma = 1/(2 kappa). The dual variable is warm-started from the
/// previous call, so an instance is confined to a single solver run;
/// concurrent runs use separate instances.
class TvQuadraticReg final : public Regularizer {
public:
    TvQuadraticReg(double kappa, Eigen::Index rows, Eigen::Index cols, int pdhg_iters);

    double value(const GridVector& x) const override;
    GridVector conj_grad(const GridVector& xi) const override;
    double sigma() const override { return 0.5 / kappa_; }

    double kappa() const { return kappa_; }
    int pdhg_iters() const { return pdhg_iters_; }

    /// Drops the PDHG warm-start state.
    void reset_warm_start() { dual_ = GradientField{}; }

private:
    double kappa_;
    Eigen::Index rows_, cols_;
    int pdhg_iters_;
    mutable GradientField dual_;  // warm start, confined to one run
};

}  // namespace ahb
