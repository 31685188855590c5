#include "fclab/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace fclab {

namespace {
void check_size(const Eigen::VectorXd& u, const Grid& grid, const char* who) {
  if (static_cast<std::size_t>(u.size()) != grid.size())
    throw std::invalid_argument(std::string(who) + ": vector does not match grid");
}
}  // namespace

double sup_norm(const Eigen::VectorXd& u) { return u.lpNorm<Eigen::Infinity>(); }

double l2_norm(const Eigen::VectorXd& u, const Grid& grid) {
  check_size(u, grid, "l2_norm");
  return std::sqrt(std::pow(grid.spacing(), grid.dim()) * u.squaredNorm());
}

double gagliardo_seminorm(const Eigen::VectorXd& u, const Grid& grid, double s) {
  check_size(u, grid, "gagliardo_seminorm");
  const auto n = u.size();
  const double expo = grid.dim() + 2.0 * s;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double du = u[i] - u[j];
      if (du == 0.0) continue;
      acc += du * du * std::pow(dist(grid.coords[i], grid.coords[j]), -expo);
    }
  }
  return std::sqrt(2.0 * acc) * std::pow(grid.spacing(), grid.dim());
}

double holder_seminorm(const Eigen::VectorXd& u, const Grid& grid, double s) {
  check_size(u, grid, "holder_seminorm");
  const auto n = u.size();
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double du = std::abs(u[i] - u[j]);
      if (du == 0.0) continue;
      best = std::max(best, du * std::pow(dist(grid.coords[i], grid.coords[j]), -s));
    }
  }
  return best;
}

double c2_norm(const Eigen::VectorXd& u, const Grid& grid) {
  check_size(u, grid, "c2_norm");
  const double h = grid.spacing();
  const int npa = grid.nodes_per_axis;
  auto at = [&](int ix, int iy) {
    return grid.dim() == 1 ? u[ix] : u[static_cast<Eigen::Index>(ix) * npa + iy];
  };
  // Clamped index for one-sided first differences at the box edge; second
  // differences instead shift their whole stencil inward so they stay true
  // second-order quotients (and exact on quadratics) everywhere.
  auto cl = [&](int i) { return std::min(std::max(i, 0), npa - 1); };
  auto cs = [&](int i) { return std::min(std::max(i, 1), npa - 2); };
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  const int ny = grid.dim() == 1 ? 1 : npa;
  for (int ix = 0; ix < npa; ++ix) {
    const int jx = cs(ix);
    for (int iy = 0; iy < ny; ++iy) {
      m0 = std::max(m0, std::abs(at(ix, iy)));
      const double dx = (at(cl(ix + 1), iy) - at(cl(ix - 1), iy)) / ((cl(ix + 1) - cl(ix - 1)) * h);
      m1 = std::max(m1, std::abs(dx));
      const double dxx = (at(jx + 1, iy) - 2.0 * at(jx, iy) + at(jx - 1, iy)) / (h * h);
      m2 = std::max(m2, std::abs(dxx));
      if (grid.dim() == 2) {
        const int jy = cs(iy);
        const double dy = (at(ix, cl(iy + 1)) - at(ix, cl(iy - 1))) / ((cl(iy + 1) - cl(iy - 1)) * h);
        m1 = std::max(m1, std::abs(dy));
        const double dyy = (at(ix, jy + 1) - 2.0 * at(ix, jy) + at(ix, jy - 1)) / (h * h);
        m2 = std::max(m2, std::abs(dyy));
        const double dxy = (at(jx + 1, jy + 1) - at(jx + 1, jy - 1) - at(jx - 1, jy + 1) +
                            at(jx - 1, jy - 1)) /
                           (4.0 * h * h);
        m2 = std::max(m2, std::abs(dxy));
      }
    }
  }
  return m0 + m1 + m2;
}

DiscreteNorms discrete_norms(const Eigen::VectorXd& u, const Grid& grid, double s) {
  DiscreteNorms n;
  n.sup = sup_norm(u);
  n.l2 = l2_norm(u, grid);
  n.gagliardo = gagliardo_seminorm(u, grid, s);
  n.holder = holder_seminorm(u, grid, s);
  n.c2 = c2_norm(u, grid);
  return n;
}

}  // namespace fclab
