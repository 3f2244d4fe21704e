#include "ahb/noise.hpp"

#include <stdexcept>

#include "ahb/random.hpp"

namespace ahb {

GridVector add_noise_exact(const GridVector& y, double delta, std::uint64_t seed) {
    if (delta < 0.0) throw std::invalid_argument("add_noise_exact: delta must be >= 0");
    if (delta == 0.0) return y;
    GaussianSampler rng(seed);
    GridVector e(rng.vector(y.size()), y.weights);
    double en = norm(e);
    while (en == 0.0) {  // probability-zero redraw
        e.values = rng.vector(y.size());
        en = norm(e);
    }
    GridVector out = y;
    out.values += (delta / en) * e.values;
    return out;
}

std::pair<GridVector, double> add_noise_relative(const GridVector& y, double delta_rel,
                                                 std::uint64_t seed) {
    if (delta_rel < 0.0) throw std::invalid_argument("add_noise_relative: delta_rel must be >= 0");
    const double yn = norm(y);
    if (yn == 0.0)
        throw std::invalid_argument("add_noise_relative: ||y|| = 0, relative level undefined");
    const double delta = delta_rel * yn;
    return {add_noise_exact(y, delta, seed), delta};
}

}  // namespace ahb
