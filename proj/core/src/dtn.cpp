#include "fclab/dtn.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fclab/fields.hpp"

namespace fclab {

namespace {

Eigen::VectorXd values_at(const Eigen::VectorXd& full, const std::vector<std::int32_t>& nodes) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(nodes.size()));
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = full[nodes[static_cast<std::size_t>(k)]];
  return out;
}

// Ordinary linear regression y ~ b0 + b1 t.
std::pair<double, double> line_fit(const std::vector<double>& t, const std::vector<double>& y) {
  const auto n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double det = n * stt - st * st;
  const double b1 = (n * sty - st * sy) / det;
  const double b0 = (sy - b1 * st) / n;
  return {b0, b1};
}

}  // namespace

DtNRecord dtn_map(const NonlocalMatrix& op, const Grid& grid, const TaylorNonlinearity& model,
                  const Eigen::VectorXd& g, const SolverOptions& opts) {
  DtNRecord rec;
  rec.nodes = grid.window_nodes(2);
  if (rec.nodes.empty()) throw std::invalid_argument("dtn_map: window 2 has no nodes");
  auto [u, rep] = solve_nonlinear(op, grid, model, g, opts);
  rec.g = g;
  rec.values = values_at(op.values * u, rec.nodes);
  rec.solve_report = rep;
  std::uint64_t h = fnv1a_mix(0xcbf29ce484222325ull, op.grid_hash);
  h = fnv1a_mix(h, op.potential_hash);
  h = fnv1a_mix(h, model.identity_hash);
  h = fnv1a_mix(h, opts.rho);
  h = fnv1a_mix(h, opts.tol);
  rec.meta_hash = h;
  return rec;
}

LinearizeReport linearize(const NonlocalMatrix& op, const Grid& grid,
                          const TaylorNonlinearity& model, const Eigen::VectorXd& g,
                          const std::vector<double>& eps_ladder, const SolverOptions& opts) {
  if (eps_ladder.size() < 2) throw std::invalid_argument("linearize: need at least two eps values");
  for (std::size_t i = 1; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] < eps_ladder[i - 1]))
      throw std::invalid_argument("linearize: eps ladder must be strictly descending");
  }
  if (!(eps_ladder.back() > 0.0)) throw std::invalid_argument("linearize: eps must be positive");
  const double gc2 = c2_norm(g, grid);
  if (eps_ladder.front() * gc2 > opts.rho * (1.0 + 1e-9))
    throw std::invalid_argument("linearize: ladder leaves the well-posedness ball");

  LinearizeReport rep;
  rep.eps = eps_ladder;

  LinearProblem lin;
  lin.op = &op;
  lin.grid = &grid;
  lin.q = model.coeff.front();
  lin.f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.interior_nodes.size()));
  lin.g = g;
  rep.u_linear_ref = solve_linear(lin);

  std::vector<Eigen::VectorXd> w;
  w.reserve(eps_ladder.size());
  for (const double eps : eps_ladder) {
    SolverOptions o = opts;
    auto [u, r] = solve_nonlinear(op, grid, model, eps * g, o);
    w.push_back(u / eps);
    rep.deviation.push_back(gagliardo_seminorm(w.back() - rep.u_linear_ref, grid, op.params.s));
  }

  // Per-node straight-line fit in eps; intercept is the eps -> 0 limit.
  rep.u_lin.resize(rep.u_linear_ref.size());
  std::vector<double> ys(eps_ladder.size());
  for (Eigen::Index i = 0; i < rep.u_lin.size(); ++i) {
    for (std::size_t j = 0; j < eps_ladder.size(); ++j) ys[j] = w[j][i];
    rep.u_lin[i] = line_fit(eps_ladder, ys).first;
  }

  // Log-log slope of the deviation, skipping values at the solver noise floor.
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < eps_ladder.size(); ++j) {
    if (rep.deviation[j] > 1e-12) {
      lx.push_back(std::log(eps_ladder[j]));
      ly.push_back(std::log(rep.deviation[j]));
    }
  }
  rep.slope = lx.size() >= 2 ? line_fit(lx, ly).second : 0.0;
  return rep;
}

RungeResult runge_control(const NonlocalMatrix& op, const Grid& grid,
                          const Eigen::VectorXd& a1_interior,
                          const Eigen::VectorXd& target_interior, double lambda,
                          const std::vector<std::int32_t>* control_nodes) {
  if (!(lambda > 0.0)) throw std::invalid_argument("runge_control: lambda must be positive");
  std::vector<std::int32_t> nodes = control_nodes ? *control_nodes : grid.window_nodes(1);
  if (nodes.empty()) throw std::invalid_argument("runge_control: no control nodes");
  const auto ni = static_cast<Eigen::Index>(grid.interior_nodes.size());
  if (target_interior.size() != ni)
    throw std::invalid_argument("runge_control: target must live on interior nodes");

  InteriorSolver solver(op, grid, a1_interior);
  const auto nc = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd t(ni, nc);
  Eigen::VectorXd basis = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index j = 0; j < nc; ++j) {
    basis[nodes[static_cast<std::size_t>(j)]] = 1.0;
    t.col(j) = restrict_interior(grid, solver.solve(
        Eigen::VectorXd::Zero(ni), basis));
    basis[nodes[static_cast<std::size_t>(j)]] = 0.0;
  }

  Eigen::MatrixXd gram = t.transpose() * t;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd c = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(t.transpose() * target_interior);

  RungeResult out;
  out.lambda = lambda;
  out.g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index j = 0; j < nc; ++j) out.g[nodes[static_cast<std::size_t>(j)]] = c[j];
  out.residual = (t * c - target_interior).norm();
  const double tn = target_interior.norm();
  out.relative_residual = out.residual / (tn > 0.0 ? tn : 1.0);
  out.control_norm = c.norm();
  out.control_c2 = c2_norm(out.g, grid);
  return out;
}

ReconstructionResult reconstruct_interior(const NonlocalMatrix& op, const Grid& grid,
                                          const Eigen::VectorXd& measured,
                                          const Eigen::VectorXd& g, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("reconstruct_interior: lambda must be positive");
  const std::vector<std::int32_t> w2 = grid.window_nodes(2);
  if (w2.empty()) throw std::invalid_argument("reconstruct_interior: window 2 has no nodes");
  if (measured.size() != static_cast<Eigen::Index>(w2.size()))
    throw std::invalid_argument("reconstruct_interior: measurement size mismatch");

  const auto ni = static_cast<Eigen::Index>(grid.interior_nodes.size());
  Eigen::MatrixXd b(static_cast<Eigen::Index>(w2.size()), ni);
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    const auto row = w2[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < ni; ++c) {
      b(r, c) = op.values(row, grid.interior_nodes[static_cast<std::size_t>(c)]);
    }
  }
  const Eigen::VectorXd rhs = measured - values_at(op.values * g, w2);

  Eigen::MatrixXd gram = b.transpose() * b;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd v = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(b.transpose() * rhs);

  ReconstructionResult out;
  out.u = g;
  for (Eigen::Index k = 0; k < ni; ++k) out.u[grid.interior_nodes[static_cast<std::size_t>(k)]] = v[k];
  out.fit_residual = (b * v - rhs).norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  out.sigma_min = svd.singularValues().tail(1)(0);
  return out;
}

ForwardOracle::ForwardOracle(const NonlocalMatrix& op, const Grid& grid, TaylorNonlinearity model,
                             SolverOptions opts, double noise_sigma, std::uint64_t seed)
    : op_(&op), grid_(&grid), model_(std::move(model)), opts_(opts),
      nodes_(grid.window_nodes(2)), noise_sigma_(noise_sigma), seed_(seed) {
  if (nodes_.empty()) throw std::invalid_argument("ForwardOracle: window 2 has no nodes");
}

Eigen::VectorXd ForwardOracle::solve_full(const Eigen::VectorXd& g) const {
  ++solves_;
  auto [u, rep] = solve_nonlinear(*op_, *grid_, model_, g, opts_);
  return u;
}

Eigen::VectorXd ForwardOracle::measure(const Eigen::VectorXd& g) const {
  Eigen::VectorXd vals = values_at(op_->values * solve_full(g), nodes_);
  if (noise_sigma_ > 0.0) {
    // Noise seeded per datum so repeated measurements are reproducible.
    std::mt19937_64 rng(fnv1a(g.data(), sizeof(double) * g.size(), seed_));
    std::normal_distribution<double> n(0.0, noise_sigma_);
    for (Eigen::Index i = 0; i < vals.size(); ++i) vals[i] += n(rng);
  }
  return vals;
}

Eigen::VectorXd ForwardOracle::interior(const Eigen::VectorXd& g) const {
  return restrict_interior(*grid_, solve_full(g));
}

namespace {

// a1 estimate from a linearized solution: -(M u)/u where u is well separated
// from zero, the mean of accepted values elsewhere.
Eigen::VectorXd divide_for_a1(const NonlocalMatrix& op, const Grid& grid,
                              const Eigen::VectorXd& u_lin_full) {
  const Eigen::VectorXd num = -restrict_interior(grid, op.values * u_lin_full);
  const Eigen::VectorXd den = restrict_interior(grid, u_lin_full);
  const double thresh = 0.05 * den.cwiseAbs().maxCoeff();
  Eigen::VectorXd a1(den.size());
  double acc = 0.0;
  int n_acc = 0;
  for (Eigen::Index i = 0; i < den.size(); ++i) {
    if (std::abs(den[i]) > thresh) {
      a1[i] = num[i] / den[i];
      acc += a1[i];
      ++n_acc;
    } else {
      a1[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (n_acc == 0) throw std::runtime_error("coefficient recovery: linearized probe vanishes on Omega");
  const double mean = acc / n_acc;
  for (Eigen::Index i = 0; i < a1.size(); ++i) {
    if (std::isnan(a1[i])) a1[i] = mean;
    // The solver needs a positive potential; recovered values this small mean
    // the probe carried no information at the node.
    a1[i] = std::max(a1[i], 1e-6);
  }
  return a1;
}

}  // namespace

RecoveryResult recover_coefficients(const ForwardOracle& oracle, const NonlocalMatrix& op,
                                    const Grid& grid, const RecoveryOptions& opts,
                                    const TaylorNonlinearity* ground_truth) {
  const auto ni = static_cast<Eigen::Index>(grid.interior_nodes.size());
  const int L = opts.target_order;
  if (L < 1) throw std::invalid_argument("recover_coefficients: target order must be >= 1");
  const auto m = opts.eps_ladder.size();
  if (m < static_cast<std::size_t>(L) + 1)
    throw std::invalid_argument("recover_coefficients: eps ladder too short for the target order");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(opts.eps_ladder[i] < opts.eps_ladder[i - 1]))
      throw std::invalid_argument("recover_coefficients: eps ladder must be strictly descending");
  }

  RecoveryResult result;
  result.eps_ladder = opts.eps_ladder;
  result.lambda_runge = opts.lambda_runge;
  result.lambda_tikhonov = opts.lambda_tikhonov;

  // Bootstrap a1: linearize a probe datum through the oracle and divide.  The
  // probe is driven at eps * g_probe, so the scale keeps the top of the ladder
  // inside the well-posedness ball with a factor two to spare.
  const Eigen::VectorXd g_probe_raw = window_bump(grid, 1, 1.0);
  const double probe_scale =
      opts.solver.rho / (2.0 * opts.eps_ladder.front() * c2_norm(g_probe_raw, grid));
  const Eigen::VectorXd g_probe = probe_scale * g_probe_raw;
  {
    std::vector<double> ys(m);
    Eigen::MatrixXd w(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const double eps = opts.eps_ladder[j];
      const Eigen::VectorXd ui = oracle.interior(eps * g_probe);
      w.col(static_cast<Eigen::Index>(j)) = (extend_interior(grid, ui) + eps * g_probe) / eps;
    }
    Eigen::VectorXd u_lin(w.rows());
    double fit_res = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < m; ++j) ys[j] = w(i, static_cast<Eigen::Index>(j));
      const auto [b0, b1] = line_fit(opts.eps_ladder, ys);
      u_lin[i] = b0;
      for (std::size_t j = 0; j < m; ++j) {
        const double r = ys[j] - (b0 + b1 * opts.eps_ladder[j]);
        fit_res += r * r;
      }
    }
    result.probe_residual = std::sqrt(fit_res / static_cast<double>(w.rows() * m));
    result.coeff.assign(1, divide_for_a1(op, grid, u_lin));
  }

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ni);
  const auto interior_of = [&](const Eigen::VectorXd& g_eps) {
    if (opts.mode == InteriorAccess::Oracle) return oracle.interior(g_eps);
    const Eigen::VectorXd meas = oracle.measure(g_eps);
    return restrict_interior(
        grid, reconstruct_interior(op, grid, meas, g_eps, opts.lambda_tikhonov).u);
  };

  for (int pass = 0; pass < opts.passes; ++pass) {
    const Eigen::VectorXd a1 = result.coeff.front();
    const RungeResult runge = runge_control(op, grid, a1, ones, opts.lambda_runge, nullptr);

    // The control pays for approximation quality with a huge C^2 norm, so the
    // theory ball on the exterior datum is useless as a ladder scale.  What
    // the fit needs is a small interior state, so probe the top of the ladder
    // and rescale to keep it under the cap.  The per-node fit below only sees
    // (state, flux) pairs and never the labels, so this is free.
    const double amp0 =
        interior_of(opts.eps_ladder.front() * runge.g).lpNorm<Eigen::Infinity>();
    const double sigma = amp0 > opts.interior_cap ? opts.interior_cap / amp0 : 1.0;

    // Interior states along the ladder and the fitted polynomial per node.
    Eigen::MatrixXd z(ni, static_cast<Eigen::Index>(m));
    Eigen::MatrixXd y(ni, static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const double eps = sigma * opts.eps_ladder[j];
      const Eigen::VectorXd g_eps = eps * runge.g;
      const Eigen::VectorXd ui = interior_of(g_eps);
      const Eigen::VectorXd u_full = extend_interior(grid, ui) + g_eps;
      z.col(static_cast<Eigen::Index>(j)) = ui;
      y.col(static_cast<Eigen::Index>(j)) = -restrict_interior(grid, op.values * u_full);
    }

    // Runge quality at the smallest eps: u/eps should approximate 1 away from
    // the dist^s boundary layer; see the runge_abort comment.
    const double eps_min = sigma * opts.eps_ladder.back();
    const double rim = grid.spec.omega_radius - 2.0 * grid.spacing();
    double acc = 0.0;
    int cnt = 0;
    for (Eigen::Index k = 0; k < ni; ++k) {
      if (norm2(grid.coords[grid.interior_nodes[static_cast<std::size_t>(k)]]) > rim) continue;
      const double dv = z(k, static_cast<Eigen::Index>(m - 1)) / eps_min - 1.0;
      acc += dv * dv;
      ++cnt;
    }
    if (cnt == 0) {  // grid too coarse for an inset; fall back to all of Omega
      for (Eigen::Index k = 0; k < ni; ++k) {
        const double dv = z(k, static_cast<Eigen::Index>(m - 1)) / eps_min - 1.0;
        acc += dv * dv;
      }
      cnt = static_cast<int>(ni);
    }
    result.runge_residual = std::sqrt(acc / cnt);
    if (result.runge_residual >= opts.runge_abort) {
      throw std::runtime_error(
          "recover_coefficients: Runge control failed to approximate 1 on Omega; "
          "relative residual " + std::to_string(result.runge_residual));
    }

    // Per-node scaled Vandermonde least squares for a_1..a_L.
    std::vector<Eigen::VectorXd> fitted(static_cast<std::size_t>(L),
                                        Eigen::VectorXd::Zero(ni));
    Eigen::MatrixXd vand(static_cast<Eigen::Index>(m), L);
    for (Eigen::Index i = 0; i < ni; ++i) {
      const double zmax = z.row(i).cwiseAbs().maxCoeff();
      if (!(zmax > 0.0))
        throw std::runtime_error("recover_coefficients: state vanishes along the ladder");
      for (std::size_t j = 0; j < m; ++j) {
        const double t = z(i, static_cast<Eigen::Index>(j)) / zmax;
        double tk = 1.0;
        for (int k = 1; k <= L; ++k) {
          tk *= t;
          vand(static_cast<Eigen::Index>(j), k - 1) = tk;
        }
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vand);
      if (qr.rank() < L)
        throw std::runtime_error("recover_coefficients: rank-deficient fit; eps ladder too short "
                                 "or states collinear");
      const Eigen::VectorXd b = qr.solve(y.row(i).transpose());
      double fact = 1.0, zk = 1.0;
      for (int k = 1; k <= L; ++k) {
        fact *= k;
        zk *= zmax;
        fitted[static_cast<std::size_t>(k - 1)][i] = b[k - 1] * fact / zk;
      }
    }
    // Keep the solver-facing a1 positive for the next pass.
    for (Eigen::Index i = 0; i < ni; ++i) {
      fitted.front()[i] = std::max(fitted.front()[i], 1e-6);
    }
    result.coeff = std::move(fitted);
  }

  if (ground_truth != nullptr) {
    result.rel_error.clear();
    for (int k = 1; k <= L; ++k) {
      const Eigen::VectorXd truth = k <= ground_truth->order
                                        ? ground_truth->coeff[static_cast<std::size_t>(k - 1)]
                                        : Eigen::VectorXd::Zero(ni);
      const double tn = truth.norm();
      const double err = (result.coeff[static_cast<std::size_t>(k - 1)] - truth).norm();
      result.rel_error.push_back(err / (tn > 0.0 ? tn : 1.0));
    }
  }
  return result;
}

UniquenessReport verify_uniqueness(const NonlocalMatrix& op, const Grid& grid,
                                   const TaylorNonlinearity& model_a,
                                   const TaylorNonlinearity& model_b,
                                   const std::vector<Eigen::VectorXd>& battery,
                                   const SolverOptions& opts) {
  UniquenessReport rep;
  const int kmax = std::max(model_a.order, model_b.order);
  for (int k = 1; k <= kmax; ++k) {
    const Eigen::VectorXd za = k <= model_a.order
                                   ? model_a.coeff[static_cast<std::size_t>(k - 1)]
                                   : Eigen::VectorXd::Zero(model_a.nodes());
    const Eigen::VectorXd zb = k <= model_b.order
                                   ? model_b.coeff[static_cast<std::size_t>(k - 1)]
                                   : Eigen::VectorXd::Zero(model_b.nodes());
    rep.coeff_distance = std::max(rep.coeff_distance, (za - zb).lpNorm<Eigen::Infinity>());
  }
  for (const auto& g : battery) {
    const DtNRecord ra = dtn_map(op, grid, model_a, g, opts);
    const DtNRecord rb = dtn_map(op, grid, model_b, g, opts);
    const double d = (ra.values - rb.values).lpNorm<Eigen::Infinity>();
    rep.per_g_diff.push_back(d);
    rep.max_diff = std::max(rep.max_diff, d);
  }
  return rep;
}

}  // namespace fclab
