#pragma once

#include <cstdint>

#include "ahb/forward_problem.hpp"

namespace ahb {

/// Estimates ||L(x)|| by power iteration on L(x)* L(x) from a random start.
/// The estimate is the Rayleigh quotient sqrt(<v, L*L v>) of the current
/// iterate, so it is nondecreasing in iters and never exceeds the true norm
/// beyond floating-point error.
double estimate_operator_norm(const ForwardProblem& prob, const GridVector& x, int iters,
                              std::uint64_t seed);

}  // namespace ahb
