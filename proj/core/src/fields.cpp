#include "fclab/fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fclab {

double bump_profile(double t) {
  const double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t2));
}

Eigen::VectorXd radial_bump(const Grid& grid, const Point& center, double radius,
                            double amplitude) {
  Eigen::VectorXd u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u[static_cast<Eigen::Index>(i)] =
        amplitude * bump_profile(dist(grid.coords[i], center) / radius);
  }
  return u;
}

Eigen::VectorXd box_bump(const Grid& grid, const Box& box, double amplitude) {
  Eigen::VectorXd u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = amplitude;
    for (int d = 0; d < grid.dim(); ++d) {
      const double c = 0.5 * (box.lo[d] + box.hi[d]);
      const double hw = 0.5 * (box.hi[d] - box.lo[d]);
      v *= bump_profile((grid.coords[i][d] - c) / hw);
    }
    u[static_cast<Eigen::Index>(i)] = v;
  }
  return u;
}

Eigen::VectorXd window_bump(const Grid& grid, int which, double amplitude) {
  const Window& w = which == 1 ? grid.spec.window1 : grid.spec.window2;
  if (w.empty()) throw std::invalid_argument("window_bump: window is empty");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(grid.size());
  for (const auto& b : w.boxes) u += box_bump(grid, b, amplitude);
  return u;
}

std::vector<Eigen::VectorXd> window_battery(const Grid& grid, int which, int count,
                                            std::uint64_t seed, double amplitude) {
  const Window& w = which == 1 ? grid.spec.window1 : grid.spec.window2;
  if (w.empty()) throw std::invalid_argument("window_battery: window is empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(grid.size());
    for (const auto& b : w.boxes) {
      const int bumps = 1 + static_cast<int>(unit(rng) * 3.0);
      for (int j = 0; j < bumps; ++j) {
        Box sub;
        for (int d = 0; d < grid.dim(); ++d) {
          const double len = b.hi[d] - b.lo[d];
          const double hw = len * (0.15 + 0.35 * unit(rng));
          const double c = b.lo[d] + hw + unit(rng) * (len - 2.0 * hw);
          sub.lo[d] = c - hw;
          sub.hi[d] = c + hw;
        }
        const double amp = amplitude * (0.2 + 0.8 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
        u += box_bump(grid, sub, amp);
      }
    }
    out.push_back(std::move(u));
  }
  return out;
}

Eigen::VectorXd random_interior_bump(const Grid& grid, double radius,
                                     std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(grid.size());
  const int bumps = 3;
  for (int j = 0; j < bumps; ++j) {
    Point c{0.0, 0.0};
    double rad = radius * (0.3 + 0.4 * unit(rng));
    for (int d = 0; d < grid.dim(); ++d) {
      c[d] = (2.0 * unit(rng) - 1.0) * (radius - rad) * 0.9;
    }
    const double amp = amplitude * (0.3 + 0.7 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    u += radial_bump(grid, c, rad, amp);
  }
  return u;
}

}  // namespace fclab
