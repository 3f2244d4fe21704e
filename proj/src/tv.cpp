#include "ahb/tv.hpp"

#include <cmath>
#include <stdexcept>

namespace ahb {

GradientField discrete_gradient(const Eigen::MatrixXd& x) {
    const Eigen::Index rows = x.rows(), cols = x.cols();
    GradientField g{Eigen::MatrixXd(rows, cols), Eigen::MatrixXd(rows, cols)};
    if (rows > 1) {
        g.du.topRows(rows - 1) = x.bottomRows(rows - 1) - x.topRows(rows - 1);
        g.du.row(rows - 1) = x.row(0) - x.row(rows - 1);
    } else {
        g.du.setZero();
    }
    if (cols > 1) {
        g.dv.leftCols(cols - 1) = x.rightCols(cols - 1) - x.leftCols(cols - 1);
        g.dv.col(cols - 1) = x.col(0) - x.col(cols - 1);
    } else {
        g.dv.setZero();
    }
    return g;
}

Eigen::MatrixXd discrete_divergence(const GradientField& g) {
    if (g.du.rows() != g.dv.rows() || g.du.cols() != g.dv.cols())
        throw std::invalid_argument("discrete_divergence: field components must have equal shape");
    const Eigen::Index rows = g.du.rows(), cols = g.du.cols();
    // div(u,v)_{i,j} = u_{i,j} - u_{i-1,j} + v_{i,j} - v_{i,j-1}, periodic
    Eigen::MatrixXd d = g.du + g.dv;
    if (rows > 1) {
        d.bottomRows(rows - 1) -= g.du.topRows(rows - 1);
        d.row(0) -= g.du.row(rows - 1);
    } else {
        d -= g.du;
    }
    if (cols > 1) {
        d.rightCols(cols - 1) -= g.dv.leftCols(cols - 1);
        d.col(0) -= g.dv.col(cols - 1);
    } else {
        d -= g.dv;
    }
    return d;
}

double tv_value(const Eigen::MatrixXd& x) {
    const GradientField g = discrete_gradient(x);
    return (g.du.array().square() + g.dv.array().square()).sqrt().sum();
}

namespace {

void project_unit_disc(GradientField& p) {
    Eigen::ArrayXXd mag = (p.du.array().square() + p.dv.array().square()).sqrt().max(1.0);
    p.du.array() /= mag;
    p.dv.array() /= mag;
}

}  // namespace

Eigen::MatrixXd pdhg_denoise(const Eigen::MatrixXd& b, double kappa, int iters,
                             GradientField& dual) {
    if (kappa <= 0.0) throw std::invalid_argument("pdhg_denoise: kappa must be positive");
    if (iters < 1) throw std::invalid_argument("pdhg_denoise: iters must be >= 1");
    const Eigen::Index rows = b.rows(), cols = b.cols();
    if (dual.du.rows() != rows || dual.du.cols() != cols) {
        dual.du = Eigen::MatrixXd::Zero(rows, cols);
        dual.dv = Eigen::MatrixXd::Zero(rows, cols);
    }

    const double step = 1.0 / std::sqrt(8.0);  // tau_p = sigma_d
    const double fid = step / kappa;

    Eigen::MatrixXd x = b;
    Eigen::MatrixXd x_bar = x;
    for (int k = 0; k < iters; ++k) {
        const GradientField gb = discrete_gradient(x_bar);
        dual.du += step * gb.du;
        dual.dv += step * gb.dv;
        project_unit_disc(dual);

        const Eigen::MatrixXd x_new = (x + step * discrete_divergence(dual) + fid * b) / (1.0 + fid);
        x_bar = 2.0 * x_new - x;
        x = x_new;
    }
    return x;
}

Eigen::MatrixXd pdhg_denoise(const Eigen::MatrixXd& b, double kappa, int iters) {
    GradientField dual;
    return pdhg_denoise(b, kappa, iters, dual);
}

}  // namespace ahb
