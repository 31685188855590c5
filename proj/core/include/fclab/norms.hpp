#pragma once

#include <Eigen/Dense>

#include "fclab/geometry.hpp"

namespace fclab {

struct DiscreteNorms {
  double sup = 0.0;
  double l2 = 0.0;           // weighted by h^dim
  double gagliardo = 0.0;    // unnormalized H^s double-sum seminorm
  double holder = 0.0;       // C^s difference quotient sup
  double c2 = 0.0;           // sup of u and its finite-difference derivatives up to order 2
};

double sup_norm(const Eigen::VectorXd& u);
double l2_norm(const Eigen::VectorXd& u, const Grid& grid);

// sqrt(h^(2 dim) sum_{i != j} (u_i - u_j)^2 / |x_i - x_j|^(dim + 2s)).
double gagliardo_seminorm(const Eigen::VectorXd& u, const Grid& grid, double s);

// max_{i != j} |u_i - u_j| / |x_i - x_j|^s.
double holder_seminorm(const Eigen::VectorXd& u, const Grid& grid, double s);

// Discrete C^2 norm: sup|u| plus sup of first and second difference
// quotients (mixed one included in 2D).  First differences go one-sided at
// the box edge; second differences shift their stencil inward there.
double c2_norm(const Eigen::VectorXd& u, const Grid& grid);

DiscreteNorms discrete_norms(const Eigen::VectorXd& u, const Grid& grid, double s);

}  // namespace fclab
