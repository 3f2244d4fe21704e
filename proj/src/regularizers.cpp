#include "ahb/regularizers.hpp"

#include <stdexcept>

namespace ahb {

TvQuadraticReg::TvQuadraticReg(double kappa, Eigen::Index rows, Eigen::Index cols, int pdhg_iters)
    : kappa_(kappa), rows_(rows), cols_(cols), pdhg_iters_(pdhg_iters) {
    if (kappa <= 0.0) throw std::invalid_argument("TvQuadraticReg: kappa must be positive");
    if (rows < 1 || cols < 1) throw std::invalid_argument("TvQuadraticReg: empty image");
    if (pdhg_iters < 1) throw std::invalid_argument("TvQuadraticReg: pdhg_iters must be >= 1");
}

double TvQuadraticReg::value(const GridVector& x) const {
    if (x.size() != rows_ * cols_)
        throw std::invalid_argument("TvQuadraticReg: vector does not match image dimensions");
    const Eigen::Map<const Eigen::MatrixXd> img(x.values.data(), rows_, cols_);
    return x.values.squaredNorm() / (2.0 * kappa_) + tv_value(img);
}

GridVector TvQuadraticReg::conj_grad(const GridVector& xi) const {
    if (xi.size() != rows_ * cols_)
        throw std::invalid_argument("TvQuadraticReg: vector does not match image dimensions");
    const Eigen::VectorXd scaled = kappa_ * xi.values;
    const Eigen::Map<const Eigen::MatrixXd> b(scaled.data(), rows_, cols_);
    const Eigen::MatrixXd x = pdhg_denoise(b, kappa_, pdhg_iters_, dual_);
    GridVector out = xi;
    out.values = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    return out;
}

}  // namespace ahb
