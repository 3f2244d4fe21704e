#include "ahb/problems/elliptic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ahb {

EllipticProblem::EllipticProblem(int m, Eigen::VectorXd f_interior, Eigen::VectorXd boundary_rhs,
                                 Eigen::VectorXd domain_center, double domain_radius)
    : m_(m),
      h_(1.0 / (m + 1)),
      f_(std::move(f_interior)),
      domain_center_(std::move(domain_center)),
      domain_radius_(domain_radius) {
    if (m < 2) throw std::invalid_argument("EllipticProblem: grid must be at least 2x2");
    const Eigen::Index n = static_cast<Eigen::Index>(m_) * m_;
    if (f_.size() != n || boundary_rhs.size() != n || domain_center_.size() != n)
        throw std::invalid_argument("EllipticProblem: field sizes do not match the grid");
    rhs_ = f_ + boundary_rhs;
    weights_ = Eigen::VectorXd::Constant(n, h_ * h_);

    const double ih2 = 1.0 / (h_ * h_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * static_cast<std::size_t>(n));
    auto idx = [this](int i, int j) { return j * m_ + i; };  // column-major
    for (int j = 0; j < m_; ++j) {
        for (int i = 0; i < m_; ++i) {
            const int k = idx(i, j);
            trip.emplace_back(k, k, 4.0 * ih2);
            if (i > 0) trip.emplace_back(k, idx(i - 1, j), -ih2);
            if (i < m_ - 1) trip.emplace_back(k, idx(i + 1, j), -ih2);
            if (j > 0) trip.emplace_back(k, idx(i, j - 1), -ih2);
            if (j < m_ - 1) trip.emplace_back(k, idx(i, j + 1), -ih2);
        }
    }
    laplacian_.resize(n, n);
    laplacian_.setFromTriplets(trip.begin(), trip.end());
    cache_.factorization.analyzePattern(laplacian_);
}

void EllipticProblem::refresh_cache(const Eigen::VectorXd& c) const {
    if (cache_.valid && cache_.c.size() == c.size() && cache_.c == c) return;
    Eigen::SparseMatrix<double> a = laplacian_;
    for (Eigen::Index k = 0; k < c.size(); ++k) a.coeffRef(k, k) += c[k];
    cache_.factorization.factorize(a);
    if (cache_.factorization.info() != Eigen::Success)
        throw std::runtime_error("EllipticProblem: factorization of A(c) failed");
    cache_.c = c;
    cache_.u = cache_.factorization.solve(rhs_);
    cache_.valid = true;
}

Eigen::VectorXd EllipticProblem::solve_with(const Eigen::VectorXd& c,
                                            const Eigen::VectorXd& rhs) const {
    refresh_cache(c);
    return cache_.factorization.solve(rhs);
}

const Eigen::VectorXd& EllipticProblem::state_for(const Eigen::VectorXd& c) const {
    refresh_cache(c);
    return cache_.u;
}

GridVector EllipticProblem::apply(const GridVector& c) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    refresh_cache(c.values);
    return GridVector(cache_.u, weights_);
}

GridVector EllipticProblem::lin_apply(const GridVector& c, const GridVector& h) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const Eigen::VectorXd& u = state_for(c.values);
    const Eigen::VectorXd rhs = h.values.cwiseProduct(u);
    return GridVector(-solve_with(c.values, rhs), weights_);
}

GridVector EllipticProblem::lin_adjoint(const GridVector& c, const GridVector& w) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const Eigen::VectorXd& u = state_for(c.values);
    const Eigen::VectorXd aw = solve_with(c.values, w.values);
    return GridVector(-u.cwiseProduct(aw), weights_);
}

bool EllipticProblem::domain_check(const GridVector& c) const {
    const double dist2 =
        ((c.values - domain_center_).array().square() * weights_.array()).sum();
    return dist2 <= domain_radius_ * domain_radius_;
}

GridVector EllipticProblem::zero_parameter() const {
    return GridVector(Eigen::VectorXd::Zero(weights_.size()), weights_);
}

EllipticSetup build_elliptic(int m, const Eigen::MatrixXd& c_true) {
    if (m < 8) throw std::invalid_argument("build_elliptic: grid must be at least 8x8");
    if (c_true.rows() != m || c_true.cols() != m)
        throw std::invalid_argument("build_elliptic: c_true must be m x m");
    if ((c_true.array() < 0.0).any())
        throw std::invalid_argument("build_elliptic: c_true must be nonnegative");

    const double h = 1.0 / (m + 1);
    const Eigen::Index n = static_cast<Eigen::Index>(m) * m;
    auto g = [](double x, double y) { return x + y; };

    Eigen::VectorXd f(n), bc = Eigen::VectorXd::Zero(n);
    const double ih2 = 1.0 / (h * h);
    for (int j = 0; j < m; ++j) {
        const double y = (j + 1) * h;
        for (int i = 0; i < m; ++i) {
            const double x = (i + 1) * h;
            const Eigen::Index k = static_cast<Eigen::Index>(j) * m + i;
            f[k] = c_true(i, j) * g(x, y);
            if (i == 0) bc[k] += ih2 * g(0.0, y);
            if (i == m - 1) bc[k] += ih2 * g(1.0, y);
            if (j == 0) bc[k] += ih2 * g(x, 0.0);
            if (j == m - 1) bc[k] += ih2 * g(x, 1.0);
        }
    }

    Eigen::VectorXd c_vec = Eigen::Map<const Eigen::VectorXd>(c_true.data(), n);
    // domain ball of radius 10 around the (already nonnegative) truth
    auto prob = std::make_shared<EllipticProblem>(m, std::move(f), std::move(bc), c_vec, 10.0);
    GridVector truth(c_vec, Eigen::VectorXd::Constant(n, h * h));
    GridVector data = prob->apply(truth);
    return EllipticSetup{std::move(prob), std::move(truth), std::move(data)};
}

Eigen::MatrixXd default_elliptic_parameter(int m) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
    const double h = 1.0 / (m + 1);
    for (int j = 0; j < m; ++j) {
        const double y = (j + 1) * h;
        for (int i = 0; i < m; ++i) {
            const double x = (i + 1) * h;
            if (x >= 0.2 && x <= 0.45 && y >= 0.25 && y <= 0.75) c(i, j) = 2.0;
            const double dx = x - 0.7, dy = y - 0.4;
            if (dx * dx + dy * dy <= 0.15 * 0.15) c(i, j) = 1.0;
        }
    }
    return c;
}

DerivativeCheckReport elliptic_derivative_check(const EllipticProblem& prob, const GridVector& c,
                                                const GridVector& h, double eps) {
    const GridVector fc = prob.apply(c);
    const GridVector dfh = prob.lin_apply(c, h);
    auto remainder = [&](double e) {
        GridVector cp = c;
        cp.values += e * h.values;
        GridVector r = prob.apply(cp);
        r.values -= fc.values + e * dfh.values;
        return norm(r);
    };
    DerivativeCheckReport rep{};
    rep.remainder_full = remainder(eps);
    rep.remainder_half = remainder(0.5 * eps);
    rep.ratio = rep.remainder_half > 0.0 ? rep.remainder_full / rep.remainder_half
                                         : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace ahb
