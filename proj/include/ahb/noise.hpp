#pragma once

#include <cstdint>
#include <utility>

#include "ahb/grid_vector.hpp"

namespace ahb {

/// Perturbs y by a Gaussian direction rescaled so that ||y_noisy - y|| equals
/// delta exactly in the space's weighted norm. delta = 0 returns y unchanged.
/// Deterministic for a fixed seed.
GridVector add_noise_exact(const GridVector& y, double delta, std::uint64_t seed);

/// Relative-level variant: returns (y_noisy, delta) with
/// delta = delta_rel * ||y|| and ||y_noisy - y|| = delta.
/// Throws if ||y|| = 0 (the relative level is undefined).
std::pair<GridVector, double> add_noise_relative(const GridVector& y, double delta_rel,
                                                 std::uint64_t seed);

}  // namespace ahb
