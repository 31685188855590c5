#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fclab/assembly.hpp"
#include "fclab/nonlinearity.hpp"
#include "fclab/norms.hpp"

namespace fclab {

// (R^s_A + q)u = f in Omega, u = g outside.  q and f live on interior nodes;
// g is a full-grid vector that must vanish on interior nodes and, unless
// enforce_window_support is off, be supported in the windows.
struct LinearProblem {
  const NonlocalMatrix* op = nullptr;
  const Grid* grid = nullptr;
  Eigen::VectorXd q;
  Eigen::VectorXd f;
  Eigen::VectorXd g;
  bool enforce_window_support = true;
};

// Factors M_II + diag(q) once; solve() then costs one matvec and one
// back-substitution.  Holds references; keep op and grid alive.
class InteriorSolver {
 public:
  InteriorSolver(const NonlocalMatrix& op, const Grid& grid, const Eigen::VectorXd& q_interior);

  // Returns the full-grid solution with exterior values copied from g.
  Eigen::VectorXd solve(const Eigen::VectorXd& f_interior, const Eigen::VectorXd& g_full) const;
  // g = 0 variant returning the full-grid vector (zero outside).
  Eigen::VectorXd solve_source(const Eigen::VectorXd& f_interior) const;

  double q_floor() const { return q_floor_; }
  double last_residual() const { return last_residual_; }
  const Grid& grid() const { return *grid_; }

 private:
  const NonlocalMatrix* op_;
  const Grid* grid_;
  Eigen::MatrixXd a_ii_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  double q_floor_ = 0.0;
  mutable double last_residual_ = 0.0;
};

Eigen::VectorXd solve_linear(const LinearProblem& problem);

// J of the contraction scheme: solve with q = a1 and zero exterior datum.
Eigen::VectorXd solve_J(const NonlocalMatrix& op, const Grid& grid,
                        const Eigen::VectorXd& a1_interior, const Eigen::VectorXd& f_interior);

struct SolverOptions {
  double rho = 0.25;
  double tol = 1e-10;
  int max_iter = 200;
  bool check_c2_bound = true;  // enforce ||g||_C2 <= rho up front
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> update_sup;  // sup norm of v_k - v_{k-1}
  std::vector<double> update_l2;
  double contraction_factor = 0.0;  // max ratio of successive update norms
  double rho = 0.0;
  double sup = 0.0;
  double holder = 0.0;
  double gagliardo = 0.0;
  double equation_residual = 0.0;  // sup of M u + a(x, u) on interior nodes
  bool converged = false;
};

// Picard iteration v <- J(-R_1(x, u0 + v)) around u0 = P_{A,a1} g.
std::pair<Eigen::VectorXd, SolveReport> solve_nonlinear(const NonlocalMatrix& op,
                                                        const Grid& grid,
                                                        const TaylorNonlinearity& model,
                                                        const Eigen::VectorXd& g,
                                                        const SolverOptions& opts = {});

struct SmallDataReport {
  std::vector<double> ratios;  // Holder seminorm of u over C2 norm of g
  double max_ratio = 0.0;
  double min_ratio = 0.0;
};

SmallDataReport verify_small_data_bound(const NonlocalMatrix& op, const Grid& grid,
                                        const TaylorNonlinearity& model,
                                        const std::vector<Eigen::VectorXd>& battery,
                                        const SolverOptions& opts = {});

// Largest rho in {2^-k : k = 1..12} whose measured contraction factor on the
// calibration direction stays <= 1/2.
double calibrate_rho(const NonlocalMatrix& op, const Grid& grid,
                     const TaylorNonlinearity& model, const Eigen::VectorXd& g_direction,
                     const SolverOptions& opts = {});

// Interior and exterior restriction helpers used across solve and dtn.
Eigen::VectorXd restrict_interior(const Grid& grid, const Eigen::VectorXd& full);
Eigen::VectorXd extend_interior(const Grid& grid, const Eigen::VectorXd& interior);

}  // namespace fclab
