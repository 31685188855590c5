#include "fclab/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace fclab {

namespace {

// sum_{k=lo}^{hi} a_k z^k / k!, accumulated in increasing k with powers built
// from z upward so partial sums and remainders share the term arithmetic.
double accumulate_terms(const TaylorNonlinearity& m, Eigen::Index node, double z,
                        int lo, int hi) {
  double acc = 0.0;
  double zk = 1.0;       // z^k
  double fact = 1.0;     // k!
  for (int k = 1; k <= hi; ++k) {
    zk *= z;
    fact *= k;
    if (k >= lo) acc += m.coeff[k - 1][node] * zk / fact;
  }
  return acc;
}

void check_node(const TaylorNonlinearity& m, Eigen::Index node, const char* who) {
  if (node < 0 || node >= m.nodes())
    throw std::invalid_argument(std::string(who) + ": node index outside the interior range");
}

}  // namespace

TaylorNonlinearity make_taylor(std::vector<Eigen::VectorXd> coeffs, double radius,
                               double analytic_bound) {
  if (coeffs.empty()) throw std::invalid_argument("make_taylor: need at least a_1");
  const Eigen::Index n = coeffs.front().size();
  if (n == 0) throw std::invalid_argument("make_taylor: empty coefficient field");
  for (const auto& c : coeffs) {
    if (c.size() != n) throw std::invalid_argument("make_taylor: coefficient sizes disagree");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("make_taylor: radius must be positive");

  TaylorNonlinearity m;
  m.order = static_cast<int>(coeffs.size());
  m.coeff = std::move(coeffs);
  m.radius = radius;
  m.coercivity_floor = m.coeff.front().minCoeff();
  if (!(m.coercivity_floor > 0.0))
    throw std::invalid_argument("make_taylor: a_1 must be bounded below by a positive constant");
  if (analytic_bound > 0.0) {
    m.analytic_bound = analytic_bound;
  } else {
    double s = 0.0;
    double rk = 1.0, fact = 1.0;
    for (int k = 1; k <= m.order; ++k) {
      rk *= m.radius;
      fact *= k;
      s += m.coeff[k - 1].lpNorm<Eigen::Infinity>() * rk / fact;
    }
    m.analytic_bound = s;
  }
  std::uint64_t h = fnv1a_mix(0xcbf29ce484222325ull, std::string("taylor"));
  h = fnv1a_mix(h, static_cast<std::uint64_t>(m.order));
  h = fnv1a_mix(h, m.radius);
  h = fnv1a_mix(h, m.analytic_bound);
  for (const auto& c : m.coeff) h = fnv1a(c.data(), sizeof(double) * c.size(), h);
  m.identity_hash = h;
  return m;
}

double eval_a(const TaylorNonlinearity& m, Eigen::Index node, double z) {
  check_node(m, node, "eval_a");
  return accumulate_terms(m, node, z, 1, m.order);
}

double eval_dz_a(const TaylorNonlinearity& m, Eigen::Index node, double z) {
  check_node(m, node, "eval_dz_a");
  double acc = 0.0;
  double zk = 1.0, fact = 1.0;  // z^(k-1), (k-1)!
  for (int k = 1; k <= m.order; ++k) {
    acc += m.coeff[k - 1][node] * zk / fact;
    zk *= z;
    fact *= k;
  }
  return acc;
}

double eval_remainder(const TaylorNonlinearity& m, Eigen::Index node, double z, int m_trunc) {
  check_node(m, node, "eval_remainder");
  if (m_trunc < 1 || m_trunc >= m.order)
    throw std::invalid_argument("eval_remainder: need 1 <= m < order");
  return accumulate_terms(m, node, z, m_trunc + 1, m.order);
}

Eigen::VectorXd eval_a(const TaylorNonlinearity& m, const Eigen::VectorXd& z) {
  if (z.size() != m.nodes()) throw std::invalid_argument("eval_a: size mismatch");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out[i] = eval_a(m, i, z[i]);
  return out;
}

Eigen::VectorXd eval_dz_a(const TaylorNonlinearity& m, const Eigen::VectorXd& z) {
  if (z.size() != m.nodes()) throw std::invalid_argument("eval_dz_a: size mismatch");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out[i] = eval_dz_a(m, i, z[i]);
  return out;
}

Eigen::VectorXd eval_remainder(const TaylorNonlinearity& m, const Eigen::VectorXd& z, int m_trunc) {
  if (z.size() != m.nodes()) throw std::invalid_argument("eval_remainder: size mismatch");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out[i] = eval_remainder(m, i, z[i], m_trunc);
  return out;
}

TailBound tail_bound(const TaylorNonlinearity& m, int m_trunc, double u_norm) {
  if (u_norm > 1.0 + 1e-12) throw std::invalid_argument("tail_bound: requires u_norm <= 1");
  if (m_trunc < 1) throw std::invalid_argument("tail_bound: requires m >= 1");
  TailBound b;
  const double p = std::pow(2.0, -m_trunc);
  b.bound_R = p * m.analytic_bound * std::pow(u_norm, m_trunc + 1);
  b.bound_dR = (m_trunc + 2) * 2.0 * p * m.analytic_bound * std::pow(u_norm, m_trunc);
  return b;
}

CauchyReport cauchy_decay_check(const TaylorNonlinearity& m) {
  CauchyReport rep;
  rep.ratios.resize(m.order, 0.0);
  double rk = 1.0, fact = 1.0;
  for (int k = 1; k <= m.order; ++k) {
    rk *= m.radius;
    fact *= k;
    const double allowed = fact / rk * m.analytic_bound;
    const double ratio = m.coeff[k - 1].lpNorm<Eigen::Infinity>() / allowed;
    rep.ratios[k - 1] = ratio;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_k = k;
    }
  }
  rep.pass = rep.max_ratio <= 1.0 + 1e-12;
  return rep;
}

double FieldSpec::eval(const Point& p) const {
  switch (kind) {
    case Kind::Constant:
      return c0;
    case Kind::Quadratic:
      return c0 + c1 * (p[0] * p[0] + p[1] * p[1]);
    case Kind::Cosine:
      return c0 + c1 * std::cos(c2 * p[0]);
  }
  return 0.0;
}

FieldSpec FieldSpec::constant(double v) { return {Kind::Constant, v, 0.0, 0.0}; }
FieldSpec FieldSpec::quadratic(double c0, double c1) { return {Kind::Quadratic, c0, c1, 0.0}; }
FieldSpec FieldSpec::cosine(double c0, double c1, double c2) { return {Kind::Cosine, c0, c1, c2}; }

Eigen::VectorXd sample_interior(const Grid& grid, const FieldSpec& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(grid.interior_nodes.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = f.eval(grid.coords[grid.interior_nodes[static_cast<std::size_t>(i)]]);
  }
  return v;
}

TaylorNonlinearity make_linear(const Grid& grid, const FieldSpec& a1, double radius) {
  return make_taylor({sample_interior(grid, a1)}, radius);
}

TaylorNonlinearity make_polynomial(const Grid& grid, const std::vector<FieldSpec>& fields,
                                   double radius) {
  std::vector<Eigen::VectorXd> coeffs;
  coeffs.reserve(fields.size());
  for (const auto& f : fields) coeffs.push_back(sample_interior(grid, f));
  return make_taylor(std::move(coeffs), radius);
}

TaylorNonlinearity make_expm1(const Grid& grid, const FieldSpec& a1, int order, double radius) {
  if (order < 1) throw std::invalid_argument("make_expm1: order must be >= 1");
  const Eigen::VectorXd base = sample_interior(grid, a1);
  std::vector<Eigen::VectorXd> coeffs(order, base);
  return make_taylor(std::move(coeffs), radius);
}

TaylorNonlinearity make_sine(const Grid& grid, const FieldSpec& a1, int order, double radius) {
  if (order < 1) throw std::invalid_argument("make_sine: order must be >= 1");
  const Eigen::VectorXd base = sample_interior(grid, a1);
  std::vector<Eigen::VectorXd> coeffs;
  coeffs.reserve(order);
  for (int k = 1; k <= order; ++k) {
    if (k % 2 == 0) {
      coeffs.push_back(Eigen::VectorXd::Zero(base.size()));
    } else {
      coeffs.push_back(((k / 2) % 2 == 0 ? 1.0 : -1.0) * base);
    }
  }
  return make_taylor(std::move(coeffs), radius);
}

}  // namespace fclab
