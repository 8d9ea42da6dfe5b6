#pragma once

#include <Eigen/Dense>
#include <string>

#include "wigtom/errors.hpp"
#include "wigtom/forward.hpp"

namespace wigtom::qp {

/// The per-alpha inversion: recover Pi from Q = P Pi under Tikhonov
/// regularization, subject to 0 <= Pi_n <= 1 and |sum_n (-1)^n Pi_n| <= 1.
///
/// With squared_form (the default) the objective is
///   ||q - P x||_2^2 + gamma^2 ||x||_2^2,
/// a quadratic program. squared_form = false selects the sum of plain
/// norms ||q - P x||_2 + gamma ||x||_2 for comparison studies.
struct QpProblem {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  double gamma = 1e-3;
  bool squared_form = true;

  int dim() const { return static_cast<int>(P.cols()); }
  void validate() const;
};

struct SolverReport {
  double objective_value = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  std::string active_constraints;
  /// gamma = 0 leaves a flat optimal face; the solver adds gamma = 1e-12
  /// internally to return the minimum-norm point and records it here.
  bool tie_break_regularized = false;
  bool converged = true;
};

struct SolverOptions {
  double tol = 1e-9;
  int max_iterations = 0;  // 0 selects 100*dim + 100
  const Eigen::VectorXd* warm_start = nullptr;  // optimization hint only
};

struct Solution {
  forward::FockResponseVector pi;
  SolverReport report;
};

struct NonConvergenceError : Error {
  NonConvergenceError(const std::string& msg, Solution best_solution)
      : Error(msg), best(std::move(best_solution)) {}
  Solution best;
};

struct InfeasibleError : Error {
  InfeasibleError(const std::string& msg, double violation)
      : Error(msg), max_violation(violation) {}
  double max_violation = 0.0;
};

/// Solves the problem to a KKT residual <= tol. Primal active-set over the
/// box with the slab handled as a general row; projected-gradient fallback
/// guards cycling. Throws NonConvergenceError (carrying the best iterate)
/// if the iteration cap is exceeded with kkt_residual > tol.
Solution solve(const QpProblem& problem, const SolverOptions& options = {});

/// Norm of the projected-gradient stationarity residual; zero exactly at
/// the optimum of this convex problem. Throws InfeasibleError when the
/// candidate violates the constraints by more than 1e-12.
double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& candidate);

/// sigma_max / sigma_min of the square response matrix; infinity when
/// exactly singular.
double condition_report(const Eigen::MatrixXd& P);

/// Euclidean projection onto the feasible set {0 <= x <= 1} intersected
/// with {|sum (-1)^n x_n| <= 1}.
Eigen::VectorXd project_feasible(const Eigen::VectorXd& z);

/// The alternating-sign vector s_n = (-1)^n defining the slab constraint.
Eigen::VectorXd slab_direction(int dim);

}  // namespace wigtom::qp
