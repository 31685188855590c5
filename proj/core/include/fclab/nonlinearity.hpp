#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fclab/geometry.hpp"

namespace fclab {

// Semilinear term a(x, z) = sum_{k=1}^{M} a_k(x) z^k / k! with coefficient
// fields stored on interior nodes.  a_1 must be bounded below by a positive
// constant; the stored floor is that minimum.
struct TaylorNonlinearity {
  int order = 0;                            // M
  std::vector<Eigen::VectorXd> coeff;       // coeff[k-1] = a_k on interior nodes
  double coercivity_floor = 0.0;            // min over nodes of a_1
  double radius = 4.0;                      // R of the Cauchy estimate
  double analytic_bound = 0.0;              // S_R
  std::uint64_t identity_hash = 0;

  Eigen::Index nodes() const { return coeff.empty() ? 0 : coeff.front().size(); }
};

// Builds the model and computes floor, default S_R = sum ||a_k|| R^k / k!,
// and the identity hash.  Throws if a_1 is not positive or sizes disagree.
TaylorNonlinearity make_taylor(std::vector<Eigen::VectorXd> coeffs, double radius = 4.0,
                               double analytic_bound = 0.0);

double eval_a(const TaylorNonlinearity& m, Eigen::Index node, double z);
double eval_dz_a(const TaylorNonlinearity& m, Eigen::Index node, double z);
// sum_{k=m_trunc+1}^{M} a_k z^k / k!; requires 1 <= m_trunc < M.
double eval_remainder(const TaylorNonlinearity& m, Eigen::Index node, double z, int m_trunc);

// Elementwise over an interior-sized vector.
Eigen::VectorXd eval_a(const TaylorNonlinearity& m, const Eigen::VectorXd& z);
Eigen::VectorXd eval_dz_a(const TaylorNonlinearity& m, const Eigen::VectorXd& z);
Eigen::VectorXd eval_remainder(const TaylorNonlinearity& m, const Eigen::VectorXd& z, int m_trunc);

struct TailBound {
  double bound_R = 0.0;   // on |R_m(x, z)| for |z| <= u_norm
  double bound_dR = 0.0;  // on |d/dz R_m|
};
// Geometric tail bounds for Holder-norm values u_norm <= 1:
// bound_R = 2^-m S_R u^(m+1), bound_dR = (m+2) 2^(1-m) S_R u^m.
TailBound tail_bound(const TaylorNonlinearity& m, int m_trunc, double u_norm);

struct CauchyReport {
  std::vector<double> ratios;  // ||a_k|| / (k!/R^k S_R) per k
  double max_ratio = 0.0;
  int worst_k = 0;
  bool pass = false;
};
// Checks ||a_k||_sup <= (k!/R^k) S_R for every stored order.
CauchyReport cauchy_decay_check(const TaylorNonlinearity& m);

// Closed-form coefficient fields used by config presets and tests.
struct FieldSpec {
  enum class Kind { Constant, Quadratic, Cosine };
  Kind kind = Kind::Constant;
  double c0 = 0.0;  // constant part
  double c1 = 0.0;  // quadratic: c0 + c1 |x|^2;  cosine: c0 + c1 cos(c2 x_1)
  double c2 = 0.0;

  double eval(const Point& p) const;
  static FieldSpec constant(double v);
  static FieldSpec quadratic(double c0, double c1);
  static FieldSpec cosine(double c0, double c1, double c2);
};

Eigen::VectorXd sample_interior(const Grid& grid, const FieldSpec& f);

// Presets: linear a1 z; polynomial with given fields a_1..a_M; a1 (e^z - 1)
// truncated at M; a1 sin(z) truncated at M.
TaylorNonlinearity make_linear(const Grid& grid, const FieldSpec& a1, double radius = 4.0);
TaylorNonlinearity make_polynomial(const Grid& grid, const std::vector<FieldSpec>& fields,
                                   double radius = 4.0);
TaylorNonlinearity make_expm1(const Grid& grid, const FieldSpec& a1, int order = 8,
                              double radius = 4.0);
TaylorNonlinearity make_sine(const Grid& grid, const FieldSpec& a1, int order = 8,
                             double radius = 4.0);

}  // namespace fclab
