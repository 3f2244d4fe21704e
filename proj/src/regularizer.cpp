#include "ahb/regularizer.hpp"

#include <cmath>
#include <stdexcept>

namespace ahb {

double bregman_distance(const Regularizer& reg, const GridVector& xi, const GridVector& x,
                        const GridVector& z) {
    const double rz = reg.value(z);
    if (!std::isfinite(rz))
        throw std::invalid_argument("bregman_distance: R(z) is not finite");
    GridVector d = z;
    d.values -= x.values;
    return rz - reg.value(x) - inner(xi, d);
}

}  // namespace ahb
