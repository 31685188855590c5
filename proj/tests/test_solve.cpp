#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fclab/solve.hpp"
#include "fclab/fields.hpp"
#include "test_support.hpp"

using namespace fclab;

namespace {

struct Setup {
  Grid grid;
  NonlocalMatrix op;
};

Setup make_setup(bool with_potential) {
  Setup s{build_grid(testsup::spec_1d()), {}};
  const KernelParams kp = KernelParams::make(1, 0.5);
  const MagneticPotential a =
      with_potential ? MagneticPotential::bump(1, 0.8 * admissible_sup_bound(1, 2.0), 2.0)
                     : MagneticPotential::zero(1);
  s.op = assemble_operator(s.grid, a, kp);
  return s;
}

double rel_sup(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / b.lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("restrict and extend round trip") {
  const Grid grid = build_grid(testsup::spec_1d());
  Eigen::VectorXd inter(static_cast<Eigen::Index>(grid.interior_nodes.size()));
  for (Eigen::Index k = 0; k < inter.size(); ++k) inter[k] = 0.5 * k - 1.0;
  const Eigen::VectorXd full = extend_interior(grid, inter);
  CHECK((restrict_interior(grid, full) - inter).lpNorm<Eigen::Infinity>() == 0.0);
  for (const auto e : grid.exterior_nodes) CHECK(full[e] == 0.0);
  CHECK_THROWS_AS(restrict_interior(grid, inter), std::invalid_argument);
  CHECK_THROWS_AS(extend_interior(grid, full), std::invalid_argument);
}

TEST_CASE("manufactured solution is reproduced through the linear path") {
  const Setup s = make_setup(true);
  const Grid& grid = s.grid;

  // pick the solution first, then read off the matching source
  const Eigen::VectorXd u_int = radial_bump(grid, {0.1, 0.0}, 0.8, 1.3);
  const Eigen::VectorXd g = window_bump(grid, 1, 0.7) + window_bump(grid, 2, -0.4);
  Eigen::VectorXd u_star = g;
  for (const auto i : grid.interior_nodes) u_star[i] = u_int[i];

  const Eigen::VectorXd q = sample_interior(grid, FieldSpec::quadratic(1.0, 0.5));
  LinearProblem p;
  p.op = &s.op;
  p.grid = &grid;
  p.q = q;
  p.f = restrict_interior(grid, s.op.values * u_star) +
        q.cwiseProduct(restrict_interior(grid, u_star));
  p.g = g;
  const Eigen::VectorXd u = solve_linear(p);
  CHECK(rel_sup(u, u_star) < 1e-9);
  // exterior comes back verbatim
  for (const auto e : grid.exterior_nodes) CHECK(u[e] == g[e]);
}

TEST_CASE("linear problem validation") {
  const Setup s = make_setup(false);
  const Grid& grid = s.grid;
  const auto ni = static_cast<Eigen::Index>(grid.interior_nodes.size());

  LinearProblem p;
  p.op = &s.op;
  p.grid = &grid;
  p.q = Eigen::VectorXd::Ones(ni);
  p.f = Eigen::VectorXd::Zero(ni);
  p.g = window_bump(grid, 1, 1.0);
  CHECK_NOTHROW(solve_linear(p));

  auto bad = p;
  bad.g[grid.interior_nodes[2]] = 0.1;
  CHECK_THROWS_AS(solve_linear(bad), std::invalid_argument);

  bad = p;
  bad.g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  bad.g[1] = 0.3;  // exterior but not in a window
  CHECK_THROWS_AS(solve_linear(bad), std::invalid_argument);
  bad.enforce_window_support = false;
  CHECK_NOTHROW(solve_linear(bad));

  bad = p;
  bad.q[0] = 0.0;
  CHECK_THROWS_AS(solve_linear(bad), std::invalid_argument);

  bad = p;
  bad.q[0] = -0.5;
  CHECK_THROWS_AS(solve_linear(bad), std::invalid_argument);
}

TEST_CASE("maximum principle and barrier on a randomized battery") {
  for (const bool with_potential : {false, true}) {
    const Setup s = make_setup(with_potential);
    const Grid& grid = s.grid;
    const auto ni = static_cast<Eigen::Index>(grid.interior_nodes.size());

    std::mt19937_64 rng(with_potential ? 101 : 100);
    std::uniform_real_distribution<double> uamp(0.0, 1.0);
    for (int t = 0; t < 25; ++t) {
      const Eigen::VectorXd q =
          sample_interior(grid, FieldSpec::quadratic(0.5 + uamp(rng), 0.3 * uamp(rng)));
      Eigen::VectorXd f(ni);
      for (Eigen::Index i = 0; i < ni; ++i) f[i] = uamp(rng);
      Eigen::VectorXd g = window_bump(grid, 1, uamp(rng)) + window_bump(grid, 2, uamp(rng));

      LinearProblem p;
      p.op = &s.op;
      p.grid = &grid;
      p.q = q;
      p.f = f;
      p.g = g;
      const Eigen::VectorXd u = solve_linear(p);
      CHECK(u.minCoeff() >= -1e-12);
      CHECK(u.lpNorm<Eigen::Infinity>() <=
            f.lpNorm<Eigen::Infinity>() / q.minCoeff() + g.lpNorm<Eigen::Infinity>() + 1e-10);
    }
  }
}

TEST_CASE("order-one models shortcut to the linear solver") {
  const Setup s = make_setup(true);
  const Grid& grid = s.grid;
  const TaylorNonlinearity lin = make_linear(grid, FieldSpec::quadratic(1.0, 0.5));
  const Eigen::VectorXd g = window_bump(grid, 1, 0.2);

  SolverOptions opts;
  opts.check_c2_bound = false;
  auto [u, rep] = solve_nonlinear(s.op, grid, lin, g, opts);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);

  LinearProblem p;
  p.op = &s.op;
  p.grid = &grid;
  p.q = lin.coeff.front();
  p.f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.interior_nodes.size()));
  p.g = g;
  CHECK((u - solve_linear(p)).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("picard iteration contracts and satisfies the equation") {
  const Setup s = make_setup(true);
  const Grid& grid = s.grid;
  const TaylorNonlinearity model = make_polynomial(
      grid, {FieldSpec::constant(1.0), FieldSpec::constant(1.0), FieldSpec::constant(1.0)});

  SolverOptions opts;
  const Eigen::VectorXd raw = window_bump(grid, 1, 1.0);
  const Eigen::VectorXd g = raw * (opts.rho / c2_norm(raw, grid));

  auto [u, rep] = solve_nonlinear(s.op, grid, model, g, opts);
  CHECK(rep.converged);
  CHECK(rep.iterations >= 2);
  CHECK(rep.contraction_factor < 1.0);
  CHECK(rep.equation_residual < 1e-8);
  // updates really decay
  for (std::size_t k = 1; k < rep.update_sup.size(); ++k) {
    if (rep.update_sup[k - 1] >= 10.0 * opts.tol)
      CHECK(rep.update_sup[k] < rep.update_sup[k - 1]);
  }

  // rerun is bitwise identical
  auto [u2, rep2] = solve_nonlinear(s.op, grid, model, g, opts);
  CHECK((u - u2).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("c2 precondition is enforced only when asked") {
  const Setup s = make_setup(false);
  const Grid& grid = s.grid;
  const TaylorNonlinearity model = make_expm1(grid, FieldSpec::constant(1.0), 6);
  SolverOptions opts;
  const Eigen::VectorXd raw = window_bump(grid, 1, 1.0);
  const Eigen::VectorXd big = raw * (3.0 * opts.rho / c2_norm(raw, grid));

  CHECK_THROWS_AS(solve_nonlinear(s.op, grid, model, big, opts), std::invalid_argument);
  opts.check_c2_bound = false;
  CHECK_NOTHROW(solve_nonlinear(s.op, grid, model, big, opts));
}

TEST_CASE("small data ratios stay bounded across a battery") {
  const Setup s = make_setup(true);
  const Grid& grid = s.grid;
  const TaylorNonlinearity model = make_expm1(grid, FieldSpec::constant(1.0), 6);
  SolverOptions opts;

  auto battery = window_battery(grid, 1, 8, 424242, 1.0);
  for (auto& g : battery) g *= opts.rho / c2_norm(g, grid);
  const SmallDataReport rep = verify_small_data_bound(s.op, grid, model, battery, opts);
  CHECK(rep.ratios.size() == battery.size());
  CHECK(rep.min_ratio > 0.0);
  CHECK(std::isfinite(rep.max_ratio));
}

TEST_CASE("rho calibration lands on a dyadic value that contracts") {
  const Setup s = make_setup(false);
  const Grid& grid = s.grid;
  const TaylorNonlinearity model = make_polynomial(
      grid, {FieldSpec::constant(1.0), FieldSpec::constant(2.0), FieldSpec::constant(4.0)});
  const Eigen::VectorXd dir = window_bump(grid, 1, 1.0);

  const double rho = calibrate_rho(s.op, grid, model, dir);
  CHECK(rho > 0.0);
  const double k = -std::log2(rho);
  CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-12));

  SolverOptions opts;
  opts.rho = rho;
  const Eigen::VectorXd g = dir * (rho / c2_norm(dir, grid));
  auto [u, rep] = solve_nonlinear(s.op, grid, model, g, opts);
  CHECK(rep.converged);
  if (rep.iterations >= 2) CHECK(rep.contraction_factor <= 0.5);
}
