#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ahb/forward_problem.hpp"

namespace ahb {

/// Rasterizes the standard 10-ellipse modified Shepp-Logan phantom on an
/// I x J grid over [-1,1]^2 (pixel value = sum of ellipse intensities at the
/// pixel center). Values lie in [0, 1].
Eigen::MatrixXd shepp_logan(int rows, int cols);

enum class TomoGeometry { Parallel, Fan };

/// One X-ray: a point on the line and a unit direction.
struct Ray {
    double px, py;
    double dx, dy;
};

/// Ray set for an I x J image of unit pixels centered at the origin.
/// Parallel geometry spaces the rays of each angle across the image
/// diagonal; fan geometry places the source at twice the image half-diagonal
/// with the fan just covering the circumscribed circle. Angles are evenly
/// spaced over [1, 360] degrees.
std::vector<Ray> tomo_rays(int rows, int cols, int n_angles, int n_rays, TomoGeometry geometry);

/// Sparse line-integral operator: entry (r, p) is the exact length of ray r
/// inside pixel p (column-major pixel order). Both spaces are Euclidean.
class TomoProblem final : public ForwardProblem {
public:
    TomoProblem(int rows, int cols, int n_angles, int n_rays, TomoGeometry geometry);

    GridVector apply(const GridVector& x) const override;
    GridVector lin_apply(const GridVector& x, const GridVector& h) const override;
    GridVector lin_adjoint(const GridVector& x, const GridVector& w) const override;
    bool is_linear() const override { return true; }
    std::string name() const override { return "tomo"; }
    GridVector zero_parameter() const override;
    GridVector zero_data() const override;

    int image_rows() const { return rows_; }
    int image_cols() const { return cols_; }
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& system_matrix() const { return system_; }

private:
    int rows_, cols_;
    Eigen::SparseMatrix<double, Eigen::RowMajor> system_;    // M x N
    Eigen::SparseMatrix<double, Eigen::RowMajor> system_t_;  // N x M
};

struct TomoSetup {
    std::shared_ptr<TomoProblem> problem;
    GridVector truth;       // vectorized phantom
    GridVector exact_data;  // sinogram of the phantom
};

TomoSetup build_tomo(int rows, int cols, int n_angles, int n_rays, TomoGeometry geometry);

}  // namespace ahb
