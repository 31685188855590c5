#include "fclab/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace fclab {

std::string scheme_name(CellScheme scheme) {
  return scheme == CellScheme::PcCell ? "pc" : "m2";
}

CellScheme scheme_from_name(const std::string& name) {
  if (name == "pc") return CellScheme::PcCell;
  if (name == "m2") return CellScheme::SecondMoment;
  throw std::invalid_argument("unknown cell scheme: " + name);
}

double node_weight(const Grid& grid) {
  return std::pow(grid.spacing(), grid.dim());
}

Eigen::ArrayXd offset_weights_1d(const Grid& grid, const KernelParams& kp, CellScheme scheme) {
  const int npa = grid.nodes_per_axis;
  const double h = grid.spacing();
  const double c = kp.norm_const;
  const double s = kp.s;
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(npa);
  for (int m = 1; m < npa; ++m) {
    const double a = m * h - 0.5 * h;
    const double b = m * h + 0.5 * h;
    if (scheme == CellScheme::PcCell) {
      w[m] = c / (2.0 * s) * (std::pow(a, -2.0 * s) - std::pow(b, -2.0 * s));
    } else {
      const double beta = 2.0 - 2.0 * s;
      w[m] = c / (m * h * m * h * beta) * (std::pow(b, beta) - std::pow(a, beta));
    }
  }
  return w;
}

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlx[8] = {
    -0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
    -0.18343464249564980, 0.18343464249564980, 0.52553240991632899,
    0.79666647741362674, 0.96028985649753623};
constexpr double kGlw[8] = {
    0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
    0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

// Integral over the cell of side h centered at (a h, b h) of K, optionally
// weighted by |z|^2 / (a^2 + b^2) h^2.  Composite tensor Gauss; near cells
// get more subdivisions because K varies fastest there.
double cell_integral_2d(int a, int b, double h, const KernelParams& kp, CellScheme scheme) {
  const int mmax = std::max(a, b);
  const int div = mmax <= 1 ? 8 : (mmax == 2 ? 4 : (mmax <= 4 ? 2 : 1));
  const double sub = h / div;
  const double cx = a * h, cy = b * h;
  const double inv_r2 = scheme == CellScheme::SecondMoment
                            ? 1.0 / ((static_cast<double>(a) * a + static_cast<double>(b) * b) * h * h)
                            : 0.0;
  const double expo = -0.5 * (kp.dim + 2.0 * kp.s);
  double acc = 0.0;
  for (int ix = 0; ix < div; ++ix) {
    const double x0 = cx - 0.5 * h + (ix + 0.5) * sub;
    for (int iy = 0; iy < div; ++iy) {
      const double y0 = cy - 0.5 * h + (iy + 0.5) * sub;
      double cell = 0.0;
      for (int p = 0; p < 8; ++p) {
        const double zx = x0 + 0.5 * sub * kGlx[p];
        for (int q = 0; q < 8; ++q) {
          const double zy = y0 + 0.5 * sub * kGlx[q];
          const double r2 = zx * zx + zy * zy;
          double v = std::pow(r2, expo);
          if (scheme == CellScheme::SecondMoment) v *= r2 * inv_r2;
          cell += kGlw[p] * kGlw[q] * v;
        }
      }
      acc += cell * 0.25 * sub * sub;
    }
  }
  return kp.norm_const * acc;
}

}  // namespace

Eigen::MatrixXd offset_weights_2d(const Grid& grid, const KernelParams& kp, CellScheme scheme) {
  const int npa = grid.nodes_per_axis;
  const double h = grid.spacing();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(npa, npa);
  for (int a = 0; a < npa; ++a) {
    for (int b = a; b < npa; ++b) {
      if (a == 0 && b == 0) continue;
      const double v = cell_integral_2d(a, b, h, kp, scheme);
      w(a, b) = v;
      w(b, a) = v;
    }
  }
  return w;
}

double diagonal_cell_coefficient(const Grid& grid, const KernelParams& kp) {
  const double h = grid.spacing();
  const double s = kp.s;
  const double c = kp.norm_const;
  if (grid.dim() == 1) {
    return c * std::pow(0.5 * h, 2.0 - 2.0 * s) / (h * h * (1.0 - s));
  }
  return 2.0 * c * std::pow(0.5 * h, 2.0 - 2.0 * s) * cell_moment_angular(s) / (h * h * (1.0 - s));
}

NonlocalMatrix assemble_fractional(const Grid& grid, const KernelParams& kp, CellScheme scheme) {
  if (kp.dim != grid.dim())
    throw std::invalid_argument("assemble_fractional: kernel dim does not match grid dim");
  const auto n = static_cast<Eigen::Index>(grid.size());
  NonlocalMatrix m;
  m.values = Eigen::MatrixXd::Zero(n, n);
  m.params = kp;
  m.dim = grid.dim();
  m.spacing = grid.spacing();
  m.scheme = scheme_name(scheme);
  m.grid_hash = grid.identity_hash();
  m.potential_hash = 0;

  const double d = diagonal_cell_coefficient(grid, kp);
  Eigen::MatrixXd& v = m.values;

  if (grid.dim() == 1) {
    const Eigen::ArrayXd w = offset_weights_1d(grid, kp, scheme);
    const int npa = grid.nodes_per_axis;
    for (int i = 0; i < npa; ++i) {
      // The diagonal-cell second difference only carries the pairs that exist;
      // that keeps constants in the kernel of every difference weight, so row
      // sums reduce to the tail mass exactly.
      double diag = tail_mass(grid.coords[i], grid, kp);
      if (i - 1 >= 0) {
        v(i, i - 1) -= d;
        diag += d;
      }
      if (i + 1 < npa) {
        v(i, i + 1) -= d;
        diag += d;
      }
      for (int m1 = 1; m1 < npa; ++m1) {
        const double tw = 2.0 * w[m1];
        if (i - m1 >= 0) {
          v(i, i - m1) -= tw;
          diag += tw;
        }
        if (i + m1 < npa) {
          v(i, i + m1) -= tw;
          diag += tw;
        }
      }
      v(i, i) += diag;
    }
  } else {
    const Eigen::MatrixXd w = offset_weights_2d(grid, kp, scheme);
    const int npa = grid.nodes_per_axis;
    for (int ix = 0; ix < npa; ++ix) {
      for (int iy = 0; iy < npa; ++iy) {
        const auto i = static_cast<Eigen::Index>(ix) * npa + iy;
        double diag = tail_mass(grid.coords[i], grid, kp);
        for (int e = -1; e <= 1; e += 2) {
          if (ix + e >= 0 && ix + e < npa) {
            v(i, i + static_cast<Eigen::Index>(e) * npa) -= d;
            diag += d;
          }
          if (iy + e >= 0 && iy + e < npa) {
            v(i, i + e) -= d;
            diag += d;
          }
        }
        for (int jx = 0; jx < npa; ++jx) {
          const int a = std::abs(jx - ix);
          for (int jy = 0; jy < npa; ++jy) {
            if (jx == ix && jy == iy) continue;
            const int b = std::abs(jy - iy);
            const double tw = 2.0 * (a <= b ? w(a, b) : w(b, a));
            v(i, static_cast<Eigen::Index>(jx) * npa + jy) -= tw;
            diag += tw;
          }
        }
        v(i, i) += diag;
      }
    }
  }
  return m;
}

NonlocalMatrix assemble_correction(const Grid& grid, const MagneticPotential& a,
                                   const KernelParams& kp) {
  if (kp.dim != grid.dim())
    throw std::invalid_argument("assemble_correction: kernel dim does not match grid dim");
  if (a.dim != grid.dim())
    throw std::invalid_argument("assemble_correction: potential dim does not match grid dim");
  const auto n = static_cast<Eigen::Index>(grid.size());
  NonlocalMatrix m;
  m.values = Eigen::MatrixXd::Zero(n, n);
  m.params = kp;
  m.dim = grid.dim();
  m.spacing = grid.spacing();
  m.scheme = "corr";
  m.grid_hash = grid.identity_hash();
  m.potential_hash = a.identity_hash;
  if (a.is_zero) return m;

  const double hw = node_weight(grid);
  // The phase vanishes unless the midpoint lies in supp A, so only pairs with
  // |x_i + x_j| < 2 * support_radius contribute.
  const double mid_lim = 2.0 * a.support_radius;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point& xi = grid.coords[i];
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Point& xj = grid.coords[j];
      if (std::abs(xi[0] + xj[0]) >= mid_lim || std::abs(xi[1] + xj[1]) >= mid_lim) continue;
      const double ck = correction_kernel(xi, xj, a, kp);
      if (ck == 0.0) continue;
      m.values(i, j) = hw * ck;
      m.values(j, i) = hw * ck;
    }
  }
  return m;
}

NonlocalMatrix assemble_operator(const Grid& grid, const MagneticPotential& a,
                                 const KernelParams& kp, CellScheme scheme) {
  NonlocalMatrix m = assemble_fractional(grid, kp, scheme);
  if (!a.is_zero) {
    const NonlocalMatrix corr = assemble_correction(grid, a, kp);
    m.values += corr.values;
    m.potential_hash = a.identity_hash;
  } else {
    m.potential_hash = a.identity_hash;
  }
  return m;
}

double bilinear_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                     const NonlocalMatrix& m) {
  if (u.size() != m.values.rows() || v.size() != m.values.rows())
    throw std::invalid_argument("bilinear_form: size mismatch");
  const double hw = std::pow(m.spacing, m.dim);
  return hw * v.dot(m.values * u);
}

double magnetic_seminorm(const Eigen::VectorXd& u, const NonlocalMatrix& m) {
  const double q = bilinear_form(u, u, m);
  if (q < -1e-10)
    throw std::runtime_error("magnetic_seminorm: bilinear form is negative beyond tolerance");
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace fclab
