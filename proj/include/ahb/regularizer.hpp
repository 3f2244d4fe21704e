#pragma once

#include <limits>

#include "ahb/grid_vector.hpp"

namespace ahb {

/// Strongly convex regularization functional R on the parameter space.
///
/// conj_grad(xi) evaluates the gradient of the convex conjugate, i.e. the
/// unique minimizer of R(x) - <xi, x> under the space's weighted pairing.
/// The returned x satisfies xi in dR(x). sigma() is a strong-convexity
/// modulus valid for the space the regularizer is used on:
///
///     R(z) - R(x) - <xi, z - x> >= sigma * ||z - x||^2.
class Regularizer {
public:
    virtual ~Regularizer() = default;

    /// R(x); may be +infinity for infeasible x.
    virtual double value(const GridVector& x) const = 0;

    /// argmin_x { R(x) - <xi, x> }  (exact for quadratic, inner-solver
    /// accuracy for TV).
    virtual GridVector conj_grad(const GridVector& xi) const = 0;

    virtual double sigma() const = 0;
};

/// Bregman distance D_R(z, x) = R(z) - R(x) - <xi, z - x> for xi in dR(x).
/// Callers must pass x = reg.conj_grad(xi). Throws if R(z) is not finite.
double bregman_distance(const Regularizer& reg, const GridVector& xi, const GridVector& x,
                        const GridVector& z);

}  // namespace ahb
