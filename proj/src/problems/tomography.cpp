#include "ahb/problems/tomography.hpp"

#include <cmath>
#include <stdexcept>

namespace ahb {

namespace {

struct Ellipse {
    double intensity, a, b, x0, y0, phi_deg;
};

// Modified Shepp-Logan ellipse table: intensity, half-axes, center, rotation.
constexpr Ellipse kSheppLogan[10] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
};

}  // namespace

Eigen::MatrixXd shepp_logan(int rows, int cols) {
    if (rows < 8 || cols < 8) throw std::invalid_argument("shepp_logan: dimensions must be >= 8");
    Eigen::MatrixXd img = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const double y = 1.0 - 2.0 * i / (rows - 1.0);  // row 0 is the top of the image
        for (int j = 0; j < cols; ++j) {
            const double x = -1.0 + 2.0 * j / (cols - 1.0);
            double v = 0.0;
            for (const Ellipse& e : kSheppLogan) {
                const double phi = e.phi_deg * M_PI / 180.0;
                const double c = std::cos(phi), s = std::sin(phi);
                const double xr = (x - e.x0) * c + (y - e.y0) * s;
                const double yr = -(x - e.x0) * s + (y - e.y0) * c;
                if (xr * xr / (e.a * e.a) + yr * yr / (e.b * e.b) <= 1.0) v += e.intensity;
            }
            img(i, j) = std::max(v, 0.0);  // the summed intensities are nonnegative by design
        }
    }
    return img;
}

std::vector<Ray> tomo_rays(int rows, int cols, int n_angles, int n_rays, TomoGeometry geometry) {
    if (n_angles < 1 || n_rays < 1)
        throw std::invalid_argument("tomo_rays: need at least one angle and one ray");
    const double diag = std::hypot(static_cast<double>(rows), static_cast<double>(cols));
    std::vector<Ray> rays;
    rays.reserve(static_cast<std::size_t>(n_angles) * n_rays);
    for (int a = 0; a < n_angles; ++a) {
        const double theta_deg =
            n_angles == 1 ? 1.0 : 1.0 + a * (360.0 - 1.0) / (n_angles - 1.0);
        const double theta = theta_deg * M_PI / 180.0;
        const double ct = std::cos(theta), st = std::sin(theta);
        if (geometry == TomoGeometry::Parallel) {
            // direction (ct, st), offsets cell-centered across the diagonal
            for (int k = 0; k < n_rays; ++k) {
                const double off = -0.5 * diag + (k + 0.5) * diag / n_rays;
                rays.push_back(Ray{-st * off, ct * off, ct, st});
            }
        } else {
            const double src_radius = diag;  // twice the image half-diagonal
            const double half_fan = std::asin(0.5 * diag / src_radius);
            const double sx = src_radius * ct, sy = src_radius * st;
            for (int k = 0; k < n_rays; ++k) {
                const double phi = -half_fan + (k + 0.5) * 2.0 * half_fan / n_rays;
                const double cp = std::cos(phi), sp = std::sin(phi);
                // central direction points from the source through the origin
                rays.push_back(Ray{sx, sy, -ct * cp + st * sp, -st * cp - ct * sp});
            }
        }
    }
    return rays;
}

namespace {

// Exact per-pixel intersection lengths of one ray with the unit-pixel grid
// [-cols/2, cols/2] x [-rows/2, rows/2]; amends triplets (row index `out_row`).
void trace_ray(const Ray& ray, int rows, int cols, int out_row,
               std::vector<Eigen::Triplet<double>>& triplets) {
    const double x_min = -0.5 * cols, y_min = -0.5 * rows;
    const double x_max = 0.5 * cols, y_max = 0.5 * rows;

    // slab clipping to [t0, t1]
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    if (ray.dx != 0.0) {
        const double ta = (x_min - ray.px) / ray.dx, tb = (x_max - ray.px) / ray.dx;
        t0 = std::max(t0, std::min(ta, tb));
        t1 = std::min(t1, std::max(ta, tb));
    } else if (ray.px <= x_min || ray.px >= x_max) {
        return;
    }
    if (ray.dy != 0.0) {
        const double ta = (y_min - ray.py) / ray.dy, tb = (y_max - ray.py) / ray.dy;
        t0 = std::max(t0, std::min(ta, tb));
        t1 = std::min(t1, std::max(ta, tb));
    } else if (ray.py <= y_min || ray.py >= y_max) {
        return;
    }
    if (t1 <= t0) return;  // misses the image; the all-zero row is permitted

    // Amanatides-Woo traversal with exact parametric lengths. Image row 0 is
    // the top of the image, so y decreases as the row index grows.
    int pi, pj;
    {
        const double eps = 1e-12 * (1.0 + std::abs(t0));
        const double x = ray.px + (t0 + eps) * ray.dx, y = ray.py + (t0 + eps) * ray.dy;
        pj = std::min(cols - 1, std::max(0, static_cast<int>(std::floor(x - x_min))));
        pi = std::min(rows - 1, std::max(0, static_cast<int>(std::floor(y_max - y))));
    }
    const int step_j = ray.dx > 0.0 ? 1 : -1;
    const int step_i = ray.dy > 0.0 ? -1 : 1;  // y grows downward in row index
    auto t_at_col = [&](int j_edge) { return (x_min + j_edge - ray.px) / ray.dx; };
    auto t_at_row = [&](int i_edge) { return (y_max - i_edge - ray.py) / ray.dy; };
    double t_next_x = ray.dx != 0.0 ? t_at_col(ray.dx > 0.0 ? pj + 1 : pj)
                                    : std::numeric_limits<double>::infinity();
    double t_next_y = ray.dy != 0.0 ? t_at_row(ray.dy > 0.0 ? pi : pi + 1)
                                    : std::numeric_limits<double>::infinity();

    double t = t0;
    while (true) {
        const double t_exit = std::min({t_next_x, t_next_y, t1});
        const double len = t_exit - t;
        if (len > 0.0) triplets.emplace_back(out_row, pj * rows + pi, len);
        if (t_exit >= t1) break;
        if (t_next_x <= t_next_y) {
            pj += step_j;
            if (pj < 0 || pj >= cols) break;
            t_next_x = t_at_col(ray.dx > 0.0 ? pj + 1 : pj);
        } else {
            pi += step_i;
            if (pi < 0 || pi >= rows) break;
            t_next_y = t_at_row(ray.dy > 0.0 ? pi : pi + 1);
        }
        t = t_exit;
    }
}

}  // namespace

TomoProblem::TomoProblem(int rows, int cols, int n_angles, int n_rays, TomoGeometry geometry)
    : rows_(rows), cols_(cols) {
    if (rows < 8 || cols < 8) throw std::invalid_argument("TomoProblem: dimensions must be >= 8");
    const std::vector<Ray> rays = tomo_rays(rows, cols, n_angles, n_rays, geometry);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(rays.size() * static_cast<std::size_t>(rows + cols));
    for (std::size_t r = 0; r < rays.size(); ++r)
        trace_ray(rays[r], rows, cols, static_cast<int>(r), triplets);
    system_.resize(static_cast<Eigen::Index>(rays.size()), static_cast<Eigen::Index>(rows) * cols);
    system_.setFromTriplets(triplets.begin(), triplets.end());
    system_t_ = system_.transpose();
}

GridVector TomoProblem::apply(const GridVector& x) const {
    return GridVector(system_ * x.values, Eigen::VectorXd::Ones(system_.rows()));
}

GridVector TomoProblem::lin_apply(const GridVector&, const GridVector& h) const {
    return apply(h);
}

GridVector TomoProblem::lin_adjoint(const GridVector&, const GridVector& w) const {
    return GridVector(system_t_ * w.values, Eigen::VectorXd::Ones(system_.cols()));
}

GridVector TomoProblem::zero_parameter() const {
    return GridVector(Eigen::VectorXd::Zero(system_.cols()), Eigen::VectorXd::Ones(system_.cols()));
}

GridVector TomoProblem::zero_data() const {
    return GridVector(Eigen::VectorXd::Zero(system_.rows()), Eigen::VectorXd::Ones(system_.rows()));
}

TomoSetup build_tomo(int rows, int cols, int n_angles, int n_rays, TomoGeometry geometry) {
    auto prob = std::make_shared<TomoProblem>(rows, cols, n_angles, n_rays, geometry);
    const Eigen::MatrixXd phantom = shepp_logan(rows, cols);
    GridVector truth(Eigen::Map<const Eigen::VectorXd>(phantom.data(), phantom.size()),
                     Eigen::VectorXd::Ones(phantom.size()));
    GridVector data = prob->apply(truth);
    return TomoSetup{std::move(prob), std::move(truth), std::move(data)};
}

}  // namespace ahb
