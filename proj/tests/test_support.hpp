#pragma once

#include <cmath>
#include <random>

#include "fclab/assembly.hpp"
#include "fclab/fields.hpp"
#include "fclab/geometry.hpp"
#include "fclab/kernel.hpp"

namespace testsup {

// Canonical 1D experiment geometry used across the suite: Omega = B(0,1),
// admissibility ball B(0,2), windows well outside B(0,6).
inline fclab::DomainSpec spec_1d(double half_width = 8.0, double spacing = 0.25) {
  fclab::DomainSpec spec;
  spec.dim = 1;
  spec.half_width = half_width;
  spec.spacing = spacing;
  spec.omega_radius = 1.0;
  spec.support_radius = 2.0;
  spec.window1.boxes = {{{-7.5, 0.0}, {-6.4, 0.0}}};
  spec.window2.boxes = {{{6.4, 0.0}, {7.5, 0.0}}};
  return spec;
}

// Small 2D analog; keep spacing coarse, the dense matrix is O(N^2).
inline fclab::DomainSpec spec_2d(double half_width = 4.0, double spacing = 0.5) {
  fclab::DomainSpec spec;
  spec.dim = 2;
  spec.half_width = half_width;
  spec.spacing = spacing;
  spec.omega_radius = 0.8;
  spec.support_radius = 1.2;
  spec.window1.boxes = {{{-3.9, -3.9}, {-3.65, 3.9}}};
  spec.window2.boxes = {{{3.65, -3.9}, {3.9, 3.9}}};
  return spec;
}

// Windowless geometry for pure operator studies.
inline fclab::DomainSpec spec_getoor_1d(double spacing) {
  fclab::DomainSpec spec;
  spec.dim = 1;
  spec.half_width = 4.0;
  spec.spacing = spacing;
  spec.omega_radius = 1.1;
  spec.support_radius = 1.5;
  return spec;
}

// The radial reference bump of the precomputed values:
// exp(1 - 1/(1 - (|x|/2)^2)), support the ball of radius 2.
inline double reference_bump(const fclab::Point& p, int) {
  return fclab::bump_profile(fclab::norm2(p) / 2.0);
}

inline Eigen::VectorXd sample(const fclab::Grid& grid, double (*f)(const fclab::Point&, int)) {
  Eigen::VectorXd u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u[static_cast<Eigen::Index>(i)] = f(grid.coords[i], grid.dim());
  }
  return u;
}

// Composite Simpson over [a, b]; used by the brute-force assembly oracles.
template <typename F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace testsup
