#include "fclab/solve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fclab {

Eigen::VectorXd restrict_interior(const Grid& grid, const Eigen::VectorXd& full) {
  if (static_cast<std::size_t>(full.size()) != grid.size())
    throw std::invalid_argument("restrict_interior: size mismatch");
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.interior_nodes.size()));
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    out[k] = full[grid.interior_nodes[static_cast<std::size_t>(k)]];
  }
  return out;
}

Eigen::VectorXd extend_interior(const Grid& grid, const Eigen::VectorXd& interior) {
  if (static_cast<std::size_t>(interior.size()) != grid.interior_nodes.size())
    throw std::invalid_argument("extend_interior: size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index k = 0; k < interior.size(); ++k) {
    out[grid.interior_nodes[static_cast<std::size_t>(k)]] = interior[k];
  }
  return out;
}

InteriorSolver::InteriorSolver(const NonlocalMatrix& op, const Grid& grid,
                               const Eigen::VectorXd& q_interior)
    : op_(&op), grid_(&grid) {
  const auto ni = static_cast<Eigen::Index>(grid.interior_nodes.size());
  if (q_interior.size() != ni)
    throw std::invalid_argument("InteriorSolver: q must live on interior nodes");
  q_floor_ = q_interior.minCoeff();
  if (!(q_floor_ > 0.0))
    throw std::invalid_argument("InteriorSolver: q must be bounded below by a positive constant");
  if (op.values.rows() != static_cast<Eigen::Index>(grid.size()))
    throw std::invalid_argument("InteriorSolver: operator does not match grid");

  a_ii_.resize(ni, ni);
  for (Eigen::Index r = 0; r < ni; ++r) {
    const auto gr = grid.interior_nodes[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < ni; ++c) {
      a_ii_(r, c) = op.values(gr, grid.interior_nodes[static_cast<std::size_t>(c)]);
    }
    a_ii_(r, r) += q_interior[r];
  }
  ldlt_.compute(a_ii_);
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error("InteriorSolver: factorization failed; the interior block should be "
                             "positive definite, check the assembled matrix");
}

Eigen::VectorXd InteriorSolver::solve(const Eigen::VectorXd& f_interior,
                                      const Eigen::VectorXd& g_full) const {
  const auto ni = static_cast<Eigen::Index>(grid_->interior_nodes.size());
  if (f_interior.size() != ni) throw std::invalid_argument("InteriorSolver: f size mismatch");
  if (g_full.size() != static_cast<Eigen::Index>(grid_->size()))
    throw std::invalid_argument("InteriorSolver: g size mismatch");

  const Eigen::VectorXd coupled = op_->values * g_full;
  Eigen::VectorXd rhs = f_interior - restrict_interior(*grid_, coupled);
  Eigen::VectorXd ui = ldlt_.solve(rhs);
  // One refinement step; LDLT is already close to machine precision, this
  // guards the residual contract at large N.
  ui += ldlt_.solve(rhs - a_ii_ * ui);
  const double rn = rhs.norm();
  last_residual_ = (rhs - a_ii_ * ui).norm() / (rn > 0.0 ? rn : 1.0);
  if (!(last_residual_ <= 1e-10))
    throw std::runtime_error("InteriorSolver: interior residual above 1e-10, solve unreliable");

  Eigen::VectorXd u = g_full;
  for (Eigen::Index k = 0; k < ui.size(); ++k) {
    u[grid_->interior_nodes[static_cast<std::size_t>(k)]] = ui[k];
  }
  return u;
}

Eigen::VectorXd InteriorSolver::solve_source(const Eigen::VectorXd& f_interior) const {
  return solve(f_interior, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid_->size())));
}

namespace {

void check_exterior_datum(const Grid& grid, const Eigen::VectorXd& g, bool enforce_window) {
  if (static_cast<std::size_t>(g.size()) != grid.size())
    throw std::invalid_argument("exterior datum does not match the grid");
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] == 0.0) continue;
    const auto iu = static_cast<std::size_t>(i);
    if (grid.is_interior(iu))
      throw std::invalid_argument("exterior datum must vanish on interior nodes");
    if (enforce_window && !grid.in_window1(iu) && !grid.in_window2(iu))
      throw std::invalid_argument("exterior datum must be supported in a window");
  }
}

}  // namespace

Eigen::VectorXd solve_linear(const LinearProblem& problem) {
  if (problem.op == nullptr || problem.grid == nullptr)
    throw std::invalid_argument("solve_linear: missing operator or grid");
  check_exterior_datum(*problem.grid, problem.g, problem.enforce_window_support);
  InteriorSolver solver(*problem.op, *problem.grid, problem.q);
  return solver.solve(problem.f, problem.g);
}

Eigen::VectorXd solve_J(const NonlocalMatrix& op, const Grid& grid,
                        const Eigen::VectorXd& a1_interior, const Eigen::VectorXd& f_interior) {
  InteriorSolver solver(op, grid, a1_interior);
  return solver.solve_source(f_interior);
}

std::pair<Eigen::VectorXd, SolveReport> solve_nonlinear(const NonlocalMatrix& op,
                                                        const Grid& grid,
                                                        const TaylorNonlinearity& model,
                                                        const Eigen::VectorXd& g,
                                                        const SolverOptions& opts) {
  check_exterior_datum(grid, g, true);
  if (opts.check_c2_bound) {
    const double gc2 = c2_norm(g, grid);
    if (gc2 > opts.rho * (1.0 + 1e-9))
      throw std::invalid_argument("solve_nonlinear: ||g||_C2 exceeds rho; scale the datum down");
  }

  SolveReport rep;
  rep.rho = opts.rho;

  InteriorSolver solver(op, grid, model.coeff.front());
  const Eigen::VectorXd zero_f =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.interior_nodes.size()));
  const Eigen::VectorXd u0 = solver.solve(zero_f, g);

  Eigen::VectorXd u = u0;
  if (model.order > 1) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(u0.size());
    double prev_update = 0.0;
    for (int it = 1; it <= opts.max_iter; ++it) {
      const Eigen::VectorXd w = restrict_interior(grid, u0 + v);
      const Eigen::VectorXd rhs = -eval_remainder(model, w, 1);
      const Eigen::VectorXd v_new = solver.solve_source(rhs);
      const Eigen::VectorXd dv = v_new - v;
      const double du_sup = sup_norm(dv);
      rep.update_sup.push_back(du_sup);
      rep.update_l2.push_back(l2_norm(dv, grid));
      rep.iterations = it;
      // Ratios are only meaningful while the updates sit well above the
      // termination scale; near tol they are dominated by rounding.
      if (it >= 2 && prev_update >= 10.0 * opts.tol) {
        const double ratio = du_sup / prev_update;
        rep.contraction_factor = std::max(rep.contraction_factor, ratio);
        if (ratio >= 1.0) {
          throw std::runtime_error(
              "solve_nonlinear: updates are not contracting; rho too large for this model");
        }
      }
      v = v_new;
      if (du_sup <= opts.tol) {
        rep.converged = true;
        break;
      }
      prev_update = du_sup;
    }
    if (!rep.converged)
      throw std::runtime_error("solve_nonlinear: max_iter exceeded before reaching tol");
    u = u0 + v;
  } else {
    rep.converged = true;
  }

  const Eigen::VectorXd ui = restrict_interior(grid, u);
  const Eigen::VectorXd res = restrict_interior(grid, op.values * u) + eval_a(model, ui);
  rep.equation_residual = sup_norm(res);
  rep.sup = sup_norm(u);
  rep.holder = holder_seminorm(u, grid, op.params.s);
  rep.gagliardo = gagliardo_seminorm(u, grid, op.params.s);
  return {u, rep};
}

SmallDataReport verify_small_data_bound(const NonlocalMatrix& op, const Grid& grid,
                                        const TaylorNonlinearity& model,
                                        const std::vector<Eigen::VectorXd>& battery,
                                        const SolverOptions& opts) {
  SmallDataReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& g : battery) {
    const double gc2 = c2_norm(g, grid);
    if (gc2 == 0.0) throw std::invalid_argument("verify_small_data_bound: zero datum in battery");
    auto [u, r] = solve_nonlinear(op, grid, model, g, opts);
    const double ratio = r.holder / gc2;
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
  }
  return rep;
}

double calibrate_rho(const NonlocalMatrix& op, const Grid& grid,
                     const TaylorNonlinearity& model, const Eigen::VectorXd& g_direction,
                     const SolverOptions& opts) {
  const double dir_c2 = c2_norm(g_direction, grid);
  if (dir_c2 == 0.0) throw std::invalid_argument("calibrate_rho: zero calibration direction");
  for (int k = 1; k <= 12; ++k) {
    const double rho = std::pow(2.0, -k);
    SolverOptions o = opts;
    o.rho = rho;
    const Eigen::VectorXd g = g_direction * (rho / dir_c2);
    try {
      auto [u, rep] = solve_nonlinear(op, grid, model, g, o);
      if (rep.converged && (rep.iterations < 2 || rep.contraction_factor <= 0.5)) return rho;
    } catch (const std::runtime_error&) {
      // not contracting at this rho, halve and retry
    }
  }
  throw std::runtime_error("calibrate_rho: no rho in {2^-1..2^-12} yields a contraction");
}

}  // namespace fclab
