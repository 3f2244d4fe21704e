#include "ahb/operator_norm.hpp"

#include <cmath>
#include <stdexcept>

#include "ahb/random.hpp"

namespace ahb {

double estimate_operator_norm(const ForwardProblem& prob, const GridVector& x, int iters,
                              std::uint64_t seed) {
    if (iters < 1) throw std::invalid_argument("estimate_operator_norm: iters must be >= 1");
    GaussianSampler rng(seed);
    GridVector v = prob.zero_parameter();
    v.values = rng.vector(v.size());
    double vn = norm(v);
    while (vn == 0.0) {
        v.values = rng.vector(v.size());
        vn = norm(v);
    }
    v.values /= vn;

    double estimate = 0.0;
    for (int k = 0; k < iters; ++k) {
        const GridVector u = prob.lin_apply(x, v);
        estimate = norm(u);  // sqrt(<v, L*L v>) since ||v|| = 1
        if (estimate == 0.0) break;  // v in the kernel; estimate stays 0
        GridVector s = prob.lin_adjoint(x, u);
        const double sn = norm(s);
        if (sn == 0.0) break;
        s.values /= sn;
        v = std::move(s);
    }
    return estimate;
}

}  // namespace ahb
