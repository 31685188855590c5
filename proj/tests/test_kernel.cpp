#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fclab/kernel.hpp"
#include "reference_values.hpp"
#include "test_support.hpp"

using namespace fclab;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("normalization constant matches the precomputed values") {
  CHECK(rel(normalization_constant(1, 0.25), refval::kNorm_1_025) < 2e-15);
  CHECK(rel(normalization_constant(1, 0.5), refval::kNorm_1_05) < 2e-15);
  CHECK(rel(normalization_constant(1, 0.75), refval::kNorm_1_075) < 2e-15);
  CHECK(rel(normalization_constant(2, 0.25), refval::kNorm_2_025) < 2e-15);
  CHECK(rel(normalization_constant(2, 0.3), refval::kNorm_2_03) < 2e-15);
  CHECK(rel(normalization_constant(2, 0.5), refval::kNorm_2_05) < 2e-15);
  // s = 1/2 in 1D is the classical 1/(2 pi)
  CHECK(rel(normalization_constant(1, 0.5), 0.5 / M_PI) < 2e-15);
}

TEST_CASE("kernel value and diagonal guard") {
  const KernelParams kp = KernelParams::make(1, 0.5);
  const Point x{0.25, 0.0}, y{1.75, 0.0};
  CHECK(rel(kernel_value(x, y, kp), kp.norm_const * std::pow(1.5, -2.0)) < 1e-15);
  CHECK_THROWS_AS(kernel_value(x, x, kp), std::invalid_argument);

  const KernelParams k2 = KernelParams::make(2, 0.3);
  const Point a{0.0, 0.0}, b{3.0, 4.0};
  CHECK(rel(kernel_value(a, b, k2), k2.norm_const * std::pow(5.0, -2.6)) < 1e-15);
}

TEST_CASE("magnetic weight is exactly swap symmetric and bounded") {
  const MagneticPotential a = MagneticPotential::bump(1, 0.35, 2.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int k = 0; k < 500; ++k) {
    const Point x{d(rng), 0.0}, y{d(rng), 0.0};
    const double rxy = magnetic_weight(x, y, a);
    CHECK(rxy == magnetic_weight(y, x, a));  // bitwise
    CHECK(std::abs(rxy) <= 1.0);
  }
  // against the direct formula
  const Point x{0.5, 0.0}, y{-0.75, 0.0};
  const Point mid{(x[0] + y[0]) / 2.0, 0.0};
  CHECK(rel(magnetic_weight(x, y, a), std::cos((x[0] - y[0]) * a(mid)[0])) < 1e-15);
}

TEST_CASE("correction kernel sign, support and small-phase accuracy") {
  const KernelParams kp = KernelParams::make(1, 0.5);
  const MagneticPotential a = MagneticPotential::bump(1, 0.35, 2.0);
  const MagneticPotential z = MagneticPotential::zero(1);

  CHECK(correction_kernel({0.3, 0.0}, {0.3, 0.0}, a, kp) == 0.0);
  CHECK(correction_kernel({0.3, 0.0}, {0.9, 0.0}, z, kp) == 0.0);
  // midpoint outside supp A kills the phase
  CHECK(correction_kernel({5.0, 0.0}, {6.0, 0.0}, a, kp) == 0.0);

  const double cb = correction_bound_constant(a);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    const Point x{d(rng), 0.0}, y{d(rng), 0.0};
    if (std::abs(x[0] - y[0]) < 1e-6) continue;
    const double ck = correction_kernel(x, y, a, kp);
    CHECK(ck >= 0.0);
    const double kk = kernel_value(x, y, kp);
    const double d2 = (x[0] - y[0]) * (x[0] - y[0]);
    CHECK(ck <= 2.0 * cb * std::min(1.0, d2) * kk * (1.0 + 1e-12));
    // 4 sin^2(phi/2) K == 2 (1 - cos phi) K
    const double direct = 2.0 * (1.0 - magnetic_weight(x, y, a)) * kk;
    CHECK(std::abs(ck - direct) <= 1e-15 * std::max(1.0, kk));
  }
}

TEST_CASE("correction bound constant") {
  CHECK(correction_bound_constant(MagneticPotential::zero(1)) == 2.0);
  CHECK(correction_bound_constant(MagneticPotential::bump(1, 3.0, 2.0)) ==
        doctest::Approx(4.5).epsilon(1e-15));
}

TEST_CASE("1d tail mass agrees with an independent quadrature") {
  const Grid grid = build_grid(testsup::spec_getoor_1d(0.25));
  const KernelParams kp = KernelParams::make(1, 0.5);
  const double lq = grid.quad_half_width();
  for (const double x : {0.0, 1.5, -3.0}) {
    // 2 c [ int_{lq-x}^inf + int_{lq+x}^inf ] z^(-1-2s) dz, right half mapped
    // to a finite interval with z = a / t
    const auto seg = [&](double a) {
      return testsup::simpson(
          [&](double t) {
            const double z = a / t;
            return std::pow(z, -2.0) * a / (t * t);
          },
          1e-8, 1.0, 40000);
    };
    // the 1e-8 truncation of the substituted integral caps the agreement
    const double want = 2.0 * kp.norm_const * (seg(lq - x) + seg(lq + x));
    CHECK(rel(tail_mass({x, 0.0}, grid, kp), want) < 5e-8);
  }
}

TEST_CASE("2d tail mass at the center reduces to the angular moment") {
  const auto spec = testsup::spec_2d();
  const Grid grid = build_grid(spec);
  for (const double s : {0.25, 0.5}) {
    const KernelParams kp = KernelParams::make(2, s);
    const double lq = grid.quad_half_width();
    // (c/s) int_0^{2pi} R(theta)^(-2s) dtheta with R = lq / cos(angle to the
    // nearest axis); the integrand folds onto 8 copies of [0, pi/4] where
    // cos^{2s} is exactly the angular moment at s + 1.
    const double want = kp.norm_const / s * 8.0 * std::pow(lq, -2.0 * s) *
                        cell_moment_angular(s + 1.0);
    CHECK(rel(tail_mass({0.0, 0.0}, grid, kp), want) < 1e-12);
  }
}

TEST_CASE("2d tail mass off center agrees with brute force") {
  const auto spec = testsup::spec_2d();
  const Grid grid = build_grid(spec);
  const KernelParams kp = KernelParams::make(2, 0.3);
  const double lq = grid.quad_half_width();
  const Point x{1.5, -2.0};
  // polar integral of the exact ray exit distance, dense midpoint rule
  const int n = 200000;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = (k + 0.5) * 2.0 * M_PI / n;
    const double cx = std::cos(th), cy = std::sin(th);
    double t = std::numeric_limits<double>::infinity();
    if (cx > 0) t = std::min(t, (lq - x[0]) / cx);
    if (cx < 0) t = std::min(t, (-lq - x[0]) / cx);
    if (cy > 0) t = std::min(t, (lq - x[1]) / cy);
    if (cy < 0) t = std::min(t, (-lq - x[1]) / cy);
    acc += std::pow(t, -2.0 * kp.s);
  }
  const double want = kp.norm_const / kp.s * acc * 2.0 * M_PI / n;
  CHECK(rel(tail_mass(x, grid, kp), want) < 1e-6);
}

TEST_CASE("angular moment matches the precomputed values") {
  CHECK(rel(cell_moment_angular(0.25), refval::kAngular_025) < 1e-13);
  CHECK(rel(cell_moment_angular(0.3), refval::kAngular_03) < 1e-13);
  CHECK(rel(cell_moment_angular(0.5), refval::kAngular_05) < 1e-13);
  CHECK(rel(cell_moment_angular(0.75), refval::kAngular_075) < 1e-13);
  // s = 1 is the plain arc length pi/4
  CHECK(rel(cell_moment_angular(1.0), M_PI / 4.0) < 1e-13);
}
