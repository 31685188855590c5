#pragma once

#include <Eigen/Dense>
#include <string>

#include "fclab/geometry.hpp"
#include "fclab/kernel.hpp"

namespace fclab {

// How the kernel is averaged over an off-diagonal cell.
//   PcCell:       W = integral of K over the cell (piecewise constant u).
//   SecondMoment: W = integral of (|z|/|m h|)^2 K over the cell, which makes
//                 the paired second-difference reproduce the cell's quadratic
//                 Taylor term and keeps the order uniform in s.
enum class CellScheme { PcCell, SecondMoment };

std::string scheme_name(CellScheme scheme);
CellScheme scheme_from_name(const std::string& name);

// Dense collocation matrix of a nonlocal operator on the lattice.  Row i
// approximates the operator value at node i for grid functions extended by
// zero outside [-L - h/2, L + h/2]^n.
struct NonlocalMatrix {
  Eigen::MatrixXd values;
  KernelParams params;
  int dim = 1;
  double spacing = 0.0;
  std::string scheme;
  std::uint64_t grid_hash = 0;
  std::uint64_t potential_hash = 0;
};

// Quadrature weight of one node, h^dim.  The discrete pairing throughout is
// <u, v> = h^dim sum_i u_i v_i.
double node_weight(const Grid& grid);

// Translation-invariant cell weights, exposed for verification.  In 1D the
// entry at offset m >= 1 multiplies the pair difference; in 2D the weight of
// offset (m1, m2) is found at (a, b) = sorted(|m1|, |m2|).
Eigen::ArrayXd offset_weights_1d(const Grid& grid, const KernelParams& kp, CellScheme scheme);
Eigen::MatrixXd offset_weights_2d(const Grid& grid, const KernelParams& kp, CellScheme scheme);

// Coefficient d of the diagonal-cell correction d * (2u_i - u_i+e - u_i-e)
// per axis; equals (integral of z_1^2 K over the center cell) / h^2.
double diagonal_cell_coefficient(const Grid& grid, const KernelParams& kp);

NonlocalMatrix assemble_fractional(const Grid& grid, const KernelParams& kp,
                                   CellScheme scheme = CellScheme::SecondMoment);

// h^dim * 2 (1 - R_A(x_i, x_j)) K(x_i, x_j) off the diagonal, zero on it.
NonlocalMatrix assemble_correction(const Grid& grid, const MagneticPotential& a,
                                   const KernelParams& kp);

// Full operator: fractional part plus magnetic correction.
NonlocalMatrix assemble_operator(const Grid& grid, const MagneticPotential& a,
                                 const KernelParams& kp,
                                 CellScheme scheme = CellScheme::SecondMoment);

// <M u, v> with the h^dim pairing.  Symmetric because M is.
double bilinear_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                     const NonlocalMatrix& m);

// sqrt(max(<M u, u>, 0)).  The form is nonnegative up to quadrature error;
// a value below -1e-10 signals a broken matrix and throws.
double magnetic_seminorm(const Eigen::VectorXd& u, const NonlocalMatrix& m);

}  // namespace fclab
