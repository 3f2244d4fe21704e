#include "ahb/problems/fredholm.hpp"

#include <cmath>
#include <stdexcept>

namespace ahb {

double fredholm_kernel(double s, double t) {
    return s <= t ? 40.0 * s * (1.0 - t) : 40.0 * t * (1.0 - s);
}

FredholmProblem::FredholmProblem(int n_nodes) : n_(n_nodes) {
    if (n_nodes < 2) throw std::invalid_argument("FredholmProblem: need at least 2 nodes");
    const double h = 1.0 / (n_ - 1);
    nodes_ = Eigen::VectorXd::LinSpaced(n_, 0.0, 1.0);
    weights_ = Eigen::VectorXd::Constant(n_, h);
    weights_[0] = 0.5 * h;
    weights_[n_ - 1] = 0.5 * h;

    kernel_.resize(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) kernel_(i, j) = fredholm_kernel(nodes_[i], nodes_[j]);

    forward_ = kernel_ * weights_.asDiagonal();
    // adjoint under the weighted pairings; equals forward_ here since the
    // kernel is symmetric and both spaces carry the same weights
    adjoint_ = weights_.cwiseInverse().asDiagonal() * forward_.transpose() * weights_.asDiagonal();
}

GridVector FredholmProblem::apply(const GridVector& x) const {
    return GridVector(forward_ * x.values, weights_);
}

GridVector FredholmProblem::lin_apply(const GridVector&, const GridVector& h) const {
    return GridVector(forward_ * h.values, weights_);
}

GridVector FredholmProblem::lin_adjoint(const GridVector&, const GridVector& w) const {
    return GridVector(adjoint_ * w.values, weights_);
}

GridVector FredholmProblem::zero_parameter() const {
    return GridVector(Eigen::VectorXd::Zero(n_), weights_);
}

GridVector FredholmProblem::zero_data() const { return zero_parameter(); }

FredholmSetup build_fredholm(int n_nodes) {
    auto prob = std::make_shared<FredholmProblem>(n_nodes);
    Eigen::VectorXd xt(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double t = prob->nodes()[i];
        xt[i] = 4.0 * t * (1.0 - t) + std::sin(2.0 * M_PI * t);
    }
    GridVector truth(std::move(xt), prob->quad_weights());
    GridVector data = prob->apply(truth);
    return FredholmSetup{std::move(prob), std::move(truth), std::move(data)};
}

}  // namespace ahb
