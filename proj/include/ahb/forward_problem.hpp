#pragma once

#include <optional>
#include <string>

#include "ahb/grid_vector.hpp"

namespace ahb {

/// A (possibly nonlinear) forward map F between two weighted spaces,
/// together with its linearization family L(x) and adjoint L(x)*.
///
/// The adjoint is taken with respect to the weighted inner products of the
/// parameter and data spaces:
///
///     <lin_apply(x, h), w>_Y = <h, lin_adjoint(x, w)>_X.
///
/// For a linear operator, apply(x) = lin_apply(., x) for any base point and
/// eta() = 0. For nonlinear maps eta() is the tangential-cone constant.
class ForwardProblem {
public:
    virtual ~ForwardProblem() = default;

    /// F(x)
    virtual GridVector apply(const GridVector& x) const = 0;
    /// L(x) h
    virtual GridVector lin_apply(const GridVector& x, const GridVector& h) const = 0;
    /// L(x)* w
    virtual GridVector lin_adjoint(const GridVector& x, const GridVector& w) const = 0;

    /// Whether x lies in the admissible domain of F.
    virtual bool domain_check(const GridVector& x) const { return true; }

    /// Known upper bound on ||L(x)||, if any; estimated otherwise.
    virtual std::optional<double> norm_bound() const { return std::nullopt; }

    /// Tangential-cone constant in [0, 1); 0 for linear operators.
    virtual double eta() const { return 0.0; }

    virtual bool is_linear() const { return false; }

    virtual std::string name() const = 0;

    /// Zero vectors of the parameter and data spaces (carry the weights).
    virtual GridVector zero_parameter() const = 0;
    virtual GridVector zero_data() const = 0;
};

}  // namespace ahb
