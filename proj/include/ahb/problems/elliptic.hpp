#pragma once

#include <memory>
#include <mutex>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "ahb/forward_problem.hpp"

namespace ahb {

/// Identification of the zeroth-order coefficient c in
///
///     -Lap u + c u = f in (0,1)^2,   u = g on the boundary,
///
/// from an L^2 measurement of u. Both parameter and state live on the m x m
/// interior nodes of a uniform grid (h = 1/(m+1)) with cell-area weights h^2,
/// discretized by the 5-point stencil; A(c) = -Lap_h + diag(c) is solved by a
/// sparse direct factorization, cached per coefficient and guarded for
/// concurrent use.
///
/// Derivative and adjoint:
///     F'(c) h  = -A(c)^{-1} (h . u(c)),
///     F'(c)* w = -u(c) . A(c)^{-1} w,
/// exact adjoints of each other under the shared h^2-weighted inner product.
class EllipticProblem final : public ForwardProblem {
public:
    /// f_interior: source at interior nodes (column-major m x m);
    /// boundary_rhs: contribution of the Dirichlet data to the right-hand
    /// side (g-neighbors divided by h^2); domain_center/radius: the L^2 ball
    /// reported by domain_check.
    EllipticProblem(int m, Eigen::VectorXd f_interior, Eigen::VectorXd boundary_rhs,
                    Eigen::VectorXd domain_center, double domain_radius);

    GridVector apply(const GridVector& c) const override;
    GridVector lin_apply(const GridVector& c, const GridVector& h) const override;
    GridVector lin_adjoint(const GridVector& c, const GridVector& w) const override;
    bool domain_check(const GridVector& c) const override;
    double eta() const override { return eta_; }
    std::string name() const override { return "elliptic"; }
    GridVector zero_parameter() const override;
    GridVector zero_data() const override { return zero_parameter(); }

    void set_eta(double eta) { eta_ = eta; }
    int grid_size() const { return m_; }
    double mesh_width() const { return h_; }

private:
    // Solves A(c) z = rhs, reusing the cached factorization when c matches.
    Eigen::VectorXd solve_with(const Eigen::VectorXd& c, const Eigen::VectorXd& rhs) const;
    const Eigen::VectorXd& state_for(const Eigen::VectorXd& c) const;  // u(c)
    void refresh_cache(const Eigen::VectorXd& c) const;

    int m_;
    double h_;
    double eta_ = 0.01;
    Eigen::VectorXd f_;
    Eigen::VectorXd rhs_;      // f + boundary terms
    Eigen::VectorXd weights_;  // h^2 at every node
    Eigen::VectorXd domain_center_;
    double domain_radius_;
    Eigen::SparseMatrix<double> laplacian_;  // -Lap_h

    struct Cache {
        bool valid = false;
        Eigen::VectorXd c;
        Eigen::VectorXd u;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factorization;
    };
    mutable Cache cache_;
    mutable std::mutex cache_mutex_;
};

struct EllipticSetup {
    std::shared_ptr<EllipticProblem> problem;
    GridVector truth;       // c+
    GridVector exact_data;  // discrete forward solve at c+
};

/// Builds the manufactured configuration u(c+) = x + y: the source is
/// f = c+ . (x + y) and the boundary data g = x + y, so the discrete state at
/// the true coefficient is the linear field exactly. The exact data is the
/// discrete forward solve at c+ (not the analytic field), keeping
/// discretization error out of the noise budget. c_true is a column-major
/// m x m image, required nonnegative.
EllipticSetup build_elliptic(int m, const Eigen::MatrixXd& c_true);

/// Piecewise-constant default coefficient: a rectangular block and a disc
/// inclusion on a zero background.
Eigen::MatrixXd default_elliptic_parameter(int m);

struct DerivativeCheckReport {
    double remainder_full;  // ||F(c+eps h) - F(c) - eps F'(c) h||
    double remainder_half;  // the same at eps/2
    double ratio;           // remainder_full / remainder_half, ~4 for O(eps^2)
};

/// Taylor-remainder check of the derivative implementation; the ratio should
/// fall in [3.5, 4.5] for a correct first-order derivative.
DerivativeCheckReport elliptic_derivative_check(const EllipticProblem& prob, const GridVector& c,
                                                const GridVector& h, double eps = 1e-3);

}  // namespace ahb
