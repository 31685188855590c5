#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fclab/geometry.hpp"

namespace fclab {

// exp(1 - 1/(1 - t^2)) for |t| < 1, identically 0 outside; peak value 1 at 0.
double bump_profile(double t);

// amplitude * bump_profile(|x - center| / radius) sampled on the grid.
Eigen::VectorXd radial_bump(const Grid& grid, const Point& center, double radius,
                            double amplitude);

// Product of per-axis bumps filling the given box; vanishes on its boundary.
Eigen::VectorXd box_bump(const Grid& grid, const Box& box, double amplitude);

// Sum of box bumps over the boxes of window 1 or 2.
Eigen::VectorXd window_bump(const Grid& grid, int which, double amplitude);

// Random smooth exterior data supported in the given window: per box, a few
// bumps with random sub-centers, widths and signs.  Deterministic in seed.
std::vector<Eigen::VectorXd> window_battery(const Grid& grid, int which, int count,
                                            std::uint64_t seed, double amplitude);

// Random smooth function supported in |x| < radius (sum of radial bumps).
Eigen::VectorXd random_interior_bump(const Grid& grid, double radius,
                                     std::uint64_t seed, double amplitude);

}  // namespace fclab
