#pragma once

#include <Eigen/Core>

namespace ahb {

/// Forward-difference field of an I x J image, periodic wrap at the last
/// row/column. du holds differences along rows (axis 1), dv along columns
/// (axis 2).
struct GradientField {
    Eigen::MatrixXd du;
    Eigen::MatrixXd dv;
};

/// (du)_{i,j} = x_{i+1,j} - x_{i,j}  (wrap: x_{1,j} - x_{I,j} at i = I)
/// (dv)_{i,j} = x_{i,j+1} - x_{i,j}  (wrap: x_{i,1} - x_{i,J} at j = J)
GradientField discrete_gradient(const Eigen::MatrixXd& x);

/// Exact negative adjoint of discrete_gradient under the Euclidean inner
/// product: <grad x, (u,v)> = <x, -div(u,v)> holds to machine precision.
Eigen::MatrixXd discrete_divergence(const GradientField& g);

/// Isotropic total variation: sum_{i,j} sqrt(du^2 + dv^2).
double tv_value(const Eigen::MatrixXd& x);

/// Approximates argmin_x { ||x - b||_F^2 / (2 kappa) + TV(x) } by a fixed
/// number of primal-dual hybrid gradient iterations, dual variable projected
/// onto the pointwise unit disc. Steps tau_p = sigma_d = 1/sqrt(8), which
/// satisfies tau_p * sigma_d * ||grad||^2 <= 1 for the forward-difference
/// stencil.
Eigen::MatrixXd pdhg_denoise(const Eigen::MatrixXd& b, double kappa, int iters);

/// Warm-started variant: `dual` seeds the dual variable and receives the
/// final one (sized on first use).
Eigen::MatrixXd pdhg_denoise(const Eigen::MatrixXd& b, double kappa, int iters,
                             GradientField& dual);

}  // namespace ahb
