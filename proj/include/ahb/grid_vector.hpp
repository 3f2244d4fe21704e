#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace ahb {

/// Element of a finite-dimensional Hilbert space: nodal values paired with
/// strictly positive quadrature weights that define the inner product
///
///     <u, v> = sum_i w_i * u_i * v_i.
///
/// All-ones weights give the plain Euclidean space. Vectors living in the
/// same space must share identical weights; operations assume this and only
/// check lengths.
struct GridVector {
    Eigen::VectorXd values;
    Eigen::VectorXd weights;

    GridVector() = default;

    GridVector(Eigen::VectorXd vals, Eigen::VectorXd w)
        : values(std::move(vals)), weights(std::move(w)) {
        if (values.size() == 0 || values.size() != weights.size())
            throw std::invalid_argument("GridVector: values/weights must have equal length >= 1");
        if ((weights.array() <= 0.0).any())
            throw std::invalid_argument("GridVector: weights must be strictly positive");
    }

    /// Vector of zeros in the same space.
    GridVector zeros_like() const {
        return GridVector(Eigen::VectorXd::Zero(values.size()), weights);
    }

    Eigen::Index size() const { return values.size(); }
};

/// Euclidean space of dimension n (unit weights).
inline GridVector euclidean(Eigen::VectorXd vals) {
    const Eigen::Index n = vals.size();
    return GridVector(std::move(vals), Eigen::VectorXd::Ones(n));
}

inline double inner(const GridVector& u, const GridVector& v) {
    return (u.values.array() * v.values.array() * u.weights.array()).sum();
}

inline double norm_sq(const GridVector& u) {
    return (u.values.array().square() * u.weights.array()).sum();
}

inline double norm(const GridVector& u) { return std::sqrt(norm_sq(u)); }

}  // namespace ahb
