#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fclab/solve.hpp"

namespace fclab {

// One exterior measurement: the datum g (supported in window 1) and the
// values of R^s_A u_g at the window-2 nodes.
struct DtNRecord {
  Eigen::VectorXd g;
  std::vector<std::int32_t> nodes;
  Eigen::VectorXd values;
  SolveReport solve_report;
  std::uint64_t meta_hash = 0;
};

DtNRecord dtn_map(const NonlocalMatrix& op, const Grid& grid, const TaylorNonlinearity& model,
                  const Eigen::VectorXd& g, const SolverOptions& opts = {});

struct LinearizeReport {
  std::vector<double> eps;
  std::vector<double> deviation;  // H^s-surrogate distance of Q(eps g)/eps to P_{A,a1} g
  double slope = 0.0;             // log-log fit of deviation vs eps
  Eigen::VectorXd u_lin;          // per-node linear-in-eps extrapolation, full grid
  Eigen::VectorXd u_linear_ref;   // P_{A,a1} g, full grid
};

// Runs the semilinear solver along the ladder and extrapolates to eps = 0.
// The deviation column uses the model's own a1, so the report is only
// meaningful in simulation mode where the model is ground truth.
LinearizeReport linearize(const NonlocalMatrix& op, const Grid& grid,
                          const TaylorNonlinearity& model, const Eigen::VectorXd& g,
                          const std::vector<double>& eps_ladder,
                          const SolverOptions& opts = {});

struct RungeResult {
  Eigen::VectorXd g;        // full grid, supported on the control nodes
  double residual = 0.0;    // || P g - target ||_l2 over interior nodes
  double relative_residual = 0.0;
  double control_norm = 0.0;     // l2 of the control values
  double control_c2 = 0.0;
  double lambda = 0.0;
};

// Least-squares steering of the linear solution toward the interior target
// using point controls on the given nodes (default: all window-1 nodes).
RungeResult runge_control(const NonlocalMatrix& op, const Grid& grid,
                          const Eigen::VectorXd& a1_interior,
                          const Eigen::VectorXd& target_interior, double lambda,
                          const std::vector<std::int32_t>* control_nodes = nullptr);

struct ReconstructionResult {
  Eigen::VectorXd u;        // full grid: reconstructed interior, g outside
  double sigma_min = 0.0;   // smallest singular value of the window-to-interior block
  double fit_residual = 0.0;
};

// Tikhonov solve of measured = M_{W2,I} v + M_{W2,E} g_E for the interior v.
ReconstructionResult reconstruct_interior(const NonlocalMatrix& op, const Grid& grid,
                                          const Eigen::VectorXd& measured,
                                          const Eigen::VectorXd& g, double lambda);

// Sealed forward model used by the recovery loop: the inversion side only
// sees g -> measurements (and, in oracle-interior mode, g -> interior trace).
class ForwardOracle {
 public:
  ForwardOracle(const NonlocalMatrix& op, const Grid& grid, TaylorNonlinearity model,
                SolverOptions opts = {}, double noise_sigma = 0.0, std::uint64_t seed = 0);

  Eigen::VectorXd measure(const Eigen::VectorXd& g) const;
  Eigen::VectorXd interior(const Eigen::VectorXd& g) const;
  const std::vector<std::int32_t>& measurement_nodes() const { return nodes_; }
  int solves() const { return solves_; }

 private:
  Eigen::VectorXd solve_full(const Eigen::VectorXd& g) const;

  const NonlocalMatrix* op_;
  const Grid* grid_;
  TaylorNonlinearity model_;
  SolverOptions opts_;
  std::vector<std::int32_t> nodes_;
  double noise_sigma_;
  std::uint64_t seed_;
  mutable int solves_ = 0;
};

enum class InteriorAccess { Oracle, Reconstructed };

struct RecoveryOptions {
  std::vector<double> eps_ladder;  // descending
  int target_order = 3;
  InteriorAccess mode = InteriorAccess::Oracle;
  double lambda_runge = 1e-6;
  double lambda_tikhonov = 1e-8;
  // Sup bound for the steered interior state at the top of the ladder; the
  // ladder is rescaled to respect it.
  double interior_cap = 0.1;
  // Abort bar on the rms of 1 - u/eps over interior nodes at least 2h away
  // from the boundary of Omega.  The dist^s edge profile keeps the outermost
  // ring away from a flat target at any fixed resolution, so this guard is
  // meant to catch outright steering failure, not the boundary layer.
  double runge_abort = 0.5;
  int passes = 2;
  SolverOptions solver;
};

struct RecoveryResult {
  std::vector<Eigen::VectorXd> coeff;   // a_k estimates on interior nodes, k = 1..L
  std::vector<double> rel_error;        // vs ground truth per order, empty if unknown
  std::vector<double> eps_ladder;
  double lambda_runge = 0.0;
  double lambda_tikhonov = 0.0;
  double runge_residual = 0.0;
  double probe_residual = 0.0;  // bootstrap linearization fit residual
};

// Closed-loop Taylor coefficient recovery per the linearize / steer / fit
// pipeline.  op describes the known magnetic operator; the nonlinearity is
// only accessed through the oracle.  ground_truth, when given, is used solely
// for the error report.
RecoveryResult recover_coefficients(const ForwardOracle& oracle, const NonlocalMatrix& op,
                                    const Grid& grid, const RecoveryOptions& opts,
                                    const TaylorNonlinearity* ground_truth = nullptr);

struct UniquenessReport {
  double coeff_distance = 0.0;  // max sup distance between coefficient fields
  double max_diff = 0.0;        // max over battery of sup measurement difference
  std::vector<double> per_g_diff;
};

UniquenessReport verify_uniqueness(const NonlocalMatrix& op, const Grid& grid,
                                   const TaylorNonlinearity& model_a,
                                   const TaylorNonlinearity& model_b,
                                   const std::vector<Eigen::VectorXd>& battery,
                                   const SolverOptions& opts = {});

}  // namespace fclab
