#pragma once

#include "fclab/geometry.hpp"

namespace fclab {

// Kernel K(x, y) = norm_const * |x - y|^(-dim - 2s).  The constant is chosen
// so that twice the principal-value second difference of u against K has
// Fourier symbol |xi|^(2s); it is therefore half the constant usually quoted
// for the fractional Laplacian.
struct KernelParams {
  int dim = 1;
  double s = 0.5;
  double norm_const = 0.0;

  static KernelParams make(int dim, double s);
};

// 2^(2s-1) Gamma(dim/2 + s) / (pi^(dim/2) |Gamma(-s)|), evaluated through the
// reflection formula to avoid the gamma function at negative arguments.
double normalization_constant(int dim, double s);

double kernel_value(const Point& x, const Point& y, const KernelParams& kp);

// cos((x - y) . A((x + y) / 2)); exactly symmetric under swapping x and y.
double magnetic_weight(const Point& x, const Point& y, const MagneticPotential& a);

// 2 (1 - R_A(x, y)) K(x, y), computed as 4 sin^2(d/2) K to keep full accuracy
// for small phases d.  Defined as 0 on the diagonal.
double correction_kernel(const Point& x, const Point& y, const MagneticPotential& a,
                         const KernelParams& kp);

// C_A with 1 - R_A(x, y) <= C_A min(1, |x - y|^2): max(2, sup|A|^2 / 2).
double correction_bound_constant(const MagneticPotential& a);

// 2 * integral of K(x, y) over y outside the box tiled by the grid cells,
// i.e. outside [-L - h/2, L + h/2]^dim.  Closed form in 1D; in 2D the angular
// integral is done adaptively to ~1e-13 relative accuracy.
double tail_mass(const Point& x, const Grid& grid, const KernelParams& kp);

// integral_0^(pi/4) cos(theta)^(2s - 2) dtheta; the angular factor in the
// second moment of K over a square cell.
double cell_moment_angular(double s);

}  // namespace fclab
