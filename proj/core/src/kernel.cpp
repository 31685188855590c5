#include "fclab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fclab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double simpson(double (*f)(double, double), double p, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a, p) + 4.0 * f(m, p) + f(b, p));
}

double adaptive_step(double (*f)(double, double), double p, double a, double b,
                     double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(f, p, a, m);
  const double right = simpson(f, p, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, p, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, p, m, b, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson for smooth integrands; tol is absolute.
double adaptive_simpson(double (*f)(double, double), double p, double a, double b, double tol) {
  return adaptive_step(f, p, a, b, simpson(f, p, a, b), tol, 40);
}

double moment_integrand(double theta, double s) {
  return std::pow(std::cos(theta), 2.0 * s - 2.0);
}

}  // namespace

double normalization_constant(int dim, double s) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("normalization_constant: dim must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("normalization_constant: s must lie in (0, 1)");
  // |Gamma(-s)| = pi / (sin(pi s) Gamma(1 + s)) for s in (0, 1).
  const double num = std::pow(2.0, 2.0 * s - 1.0) * std::tgamma(0.5 * dim + s) *
                     std::sin(kPi * s) * std::tgamma(1.0 + s);
  return num / (std::pow(kPi, 0.5 * dim) * kPi);
}

KernelParams KernelParams::make(int dim, double s) {
  KernelParams kp;
  kp.dim = dim;
  kp.s = s;
  kp.norm_const = normalization_constant(dim, s);
  return kp;
}

double kernel_value(const Point& x, const Point& y, const KernelParams& kp) {
  const double r = dist(x, y);
  if (r == 0.0) throw std::invalid_argument("kernel_value: x == y");
  return kp.norm_const * std::pow(r, -(kp.dim + 2.0 * kp.s));
}

double magnetic_weight(const Point& x, const Point& y, const MagneticPotential& a) {
  if (a.is_zero) return 1.0;
  const Point mid{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])};
  const Point am = a.eval(mid);
  const double d = (x[0] - y[0]) * am[0] + (x[1] - y[1]) * am[1];
  // cos of |d| so the swap symmetry holds bitwise, not just in exact arithmetic.
  return std::cos(std::abs(d));
}

double correction_kernel(const Point& x, const Point& y, const MagneticPotential& a,
                         const KernelParams& kp) {
  if (a.is_zero) return 0.0;
  if (x[0] == y[0] && x[1] == y[1]) return 0.0;
  const Point mid{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])};
  const Point am = a.eval(mid);
  if (am[0] == 0.0 && am[1] == 0.0) return 0.0;
  const double d = (x[0] - y[0]) * am[0] + (x[1] - y[1]) * am[1];
  const double sh = std::sin(0.5 * std::abs(d));
  return 4.0 * sh * sh * kernel_value(x, y, kp);
}

double correction_bound_constant(const MagneticPotential& a) {
  return std::max(2.0, 0.5 * a.sup_norm * a.sup_norm);
}

namespace {

struct RayBox {
  double ax, bx, ay, by;  // z-coordinates of the box relative to x
};

double ray_exit(double theta, const RayBox& b) {
  const double cx = std::cos(theta), cy = std::sin(theta);
  double t = std::numeric_limits<double>::infinity();
  if (cx > 0.0) t = std::min(t, b.bx / cx);
  else if (cx < 0.0) t = std::min(t, b.ax / cx);
  if (cy > 0.0) t = std::min(t, b.by / cy);
  else if (cy < 0.0) t = std::min(t, b.ay / cy);
  return t;
}

// Integrand R(theta)^(-2s) parameterized through a thread-local box; keeping
// the adaptive driver monomorphic avoids std::function overhead in the hot
// assembly path.
thread_local RayBox g_box;
double tail_integrand(double theta, double s) {
  return std::pow(ray_exit(theta, g_box), -2.0 * s);
}

}  // namespace

double tail_mass(const Point& x, const Grid& grid, const KernelParams& kp) {
  const double lq = grid.quad_half_width();
  const double c = kp.norm_const;
  const double s = kp.s;
  if (grid.dim() == 1) {
    const double a = lq - x[0];
    const double b = lq + x[0];
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("tail_mass: x outside the cell box");
    return c / s * (std::pow(a, -2.0 * s) + std::pow(b, -2.0 * s));
  }
  RayBox box{-lq - x[0], lq - x[0], -lq - x[1], lq - x[1]};
  if (!(box.ax < 0.0 && box.bx > 0.0 && box.ay < 0.0 && box.by > 0.0))
    throw std::invalid_argument("tail_mass: x outside the cell box");
  // Split at the corner directions; R(theta) is smooth on each arc.
  double ang[5];
  ang[0] = std::atan2(box.ay, box.ax);
  ang[1] = std::atan2(box.ay, box.bx);
  ang[2] = std::atan2(box.by, box.bx);
  ang[3] = std::atan2(box.by, box.ax);
  std::sort(ang, ang + 4);
  ang[4] = ang[0] + 2.0 * kPi;
  g_box = box;
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (ang[k + 1] - ang[k] < 1e-14) continue;
    acc += adaptive_simpson(tail_integrand, s, ang[k], ang[k + 1], 1e-14);
  }
  return c / s * acc;
}

double cell_moment_angular(double s) {
  // The integrand is smooth on [0, pi/4] for any s; callers pass s in (0, 1)
  // for the cell moment and s + 1 when reducing the center tail integral.
  if (!(s > 0.0 && s <= 2.0)) throw std::invalid_argument("cell_moment_angular: s must lie in (0, 2]");
  return adaptive_simpson(moment_integrand, s, 0.0, 0.25 * kPi, 1e-15);
}

}  // namespace fclab
