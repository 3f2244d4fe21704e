#pragma once

#include <memory>

#include <Eigen/Core>

#include "ahb/forward_problem.hpp"

namespace ahb {

/// Kernel of the first-kind integral equation on [0,1] x [0,1]:
/// 40 s (1-t) for s <= t and 40 t (1-s) for t <= s. Symmetric.
double fredholm_kernel(double s, double t);

/// Discretization of (F x)(s) = int_0^1 k(s,t) x(t) dt on n uniform nodes,
/// all integrals by the trapezoidal rule. Both spaces are L^2[0,1] with the
/// trapezoidal weights, under which the discrete operator is self-adjoint.
class FredholmProblem final : public ForwardProblem {
public:
    explicit FredholmProblem(int n_nodes);

    GridVector apply(const GridVector& x) const override;
    GridVector lin_apply(const GridVector& x, const GridVector& h) const override;
    GridVector lin_adjoint(const GridVector& x, const GridVector& w) const override;
    bool is_linear() const override { return true; }
    std::string name() const override { return "fredholm"; }
    GridVector zero_parameter() const override;
    GridVector zero_data() const override;

    int n_nodes() const { return n_; }
    const Eigen::VectorXd& nodes() const { return nodes_; }
    const Eigen::VectorXd& quad_weights() const { return weights_; }
    const Eigen::MatrixXd& kernel_matrix() const { return kernel_; }

private:
    int n_;
    Eigen::VectorXd nodes_;
    Eigen::VectorXd weights_;
    Eigen::MatrixXd kernel_;   // K_{ij} = k(t_i, t_j)
    Eigen::MatrixXd forward_;  // K diag(w)
    Eigen::MatrixXd adjoint_;  // diag(1/w) forward^T diag(w)
};

struct FredholmSetup {
    std::shared_ptr<FredholmProblem> problem;
    GridVector truth;       // x+(t) = 4 t (1-t) + sin(2 pi t)
    GridVector exact_data;  // y = F x+
};

/// Builds the problem together with the known solution and its exact data.
FredholmSetup build_fredholm(int n_nodes);

}  // namespace ahb
