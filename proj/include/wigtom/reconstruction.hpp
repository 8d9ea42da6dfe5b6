#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wigtom/detector.hpp"
#include "wigtom/forward.hpp"
#include "wigtom/qp.hpp"

namespace wigtom::recon {

struct SolverSpec {
  double gamma = 1e-3;
  double tol = 1e-9;
  int max_iterations = 0;
  bool squared_form = true;
};

/// One reconstructed phase-space point: mean and spread over iterations.
struct PointEstimate {
  double alpha = 0.0;
  double w_mean = 0.0;
  double spread = 0.0;  // sample standard deviation across iterations
  int good_iterations = 0;
  bool usable = true;
};

struct WignerEstimate {
  int outcome_index = 0;
  std::vector<PointEstimate> points;
  int iterations_used = 1;
  double gamma = 1e-3;
};

enum class LossKind { SoftL1, LeastSquares };

struct FitPoint {
  double alpha = 0.0;
  double w = 0.0;
};

struct FitOptions {
  bool even_only = false;
  LossKind loss = LossKind::SoftL1;
  /// Residual scale in L((r/scale)^2); 1 reproduces the plain composite
  /// soft-L1 objective.
  double residual_scale = 1.0;
  int max_iterations = 200;
  double tol = 1e-14;
};

/// Gaussian-modulated polynomial e^{-2 alpha^2} Poly(degree, alpha).
struct FitResult {
  Eigen::VectorXd coefficients;  // c_0..c_degree; odd entries are exactly
                                 // zero in even-only mode
  int degree = 0;
  double loss_value = 0.0;
  bool converged = true;
  bool even_only = false;

  double evaluate(double alpha) const;
};

struct ErrorReport {
  double delta = 0.0;
  std::vector<double> grid;
};

/// W = (2/pi) sum_n (-1)^n Pi_n; the slab constraint keeps the result in
/// [-2/pi, 2/pi].
double wigner_from_response(const forward::FockResponseVector& pi);

struct ReconstructOptions {
  SolverSpec solver;
  std::optional<std::uint64_t> shots;
  int workers = 1;
};

/// Per-(iteration, alpha) click probabilities, already assembled. Row
/// layout: q_cells[iteration][grid_index] is the probe vector.
WignerEstimate estimate_from_clicks(
    const Eigen::MatrixXd& response, const std::vector<double>& nominal_alphas,
    const std::vector<std::vector<Eigen::VectorXd>>& q_cells, int outcome,
    const SolverSpec& solver, int workers = 1);

/// Full pipeline for one POVM element: perturb the grid per iteration,
/// synthesize click statistics, invert per alpha, average.
WignerEstimate reconstruct_pointwise(const detector::PovmElement& element,
                                     const forward::ThermalProbeSet& probes,
                                     const forward::PhaseGrid& grid,
                                     const forward::NoiseConfig& noise,
                                     const ReconstructOptions& options = {});

/// Robust fit of the Gaussian-modulated polynomial of the given (even)
/// degree with the soft-L1 loss L(y) = 2(sqrt(1+y) - 1), by iteratively
/// reweighted least squares. The Gaussian factor is fixed, not fitted.
FitResult robust_gaussian_poly_fit(const std::vector<FitPoint>& points,
                                   int degree, const FitOptions& options = {});

/// Relative l2 error across a shared grid.
ErrorReport relative_error(const std::vector<double>& theory,
                           const std::vector<double>& recon,
                           const std::vector<double>& grid);

/// 2 m0 + 1 sample points pin a degree-2m0 polynomial; m0 + 1 suffice when
/// even symmetry is exploited.
int min_points_required(int m0, bool exploit_symmetry);

/// Runs the pipeline once per gamma with a shared seed and scores each run
/// against the analytic Wigner oracle.
std::vector<std::pair<double, double>> gamma_sweep(
    const detector::PovmElement& element, const forward::ThermalProbeSet& probes,
    const forward::PhaseGrid& grid, const forward::NoiseConfig& noise,
    const std::vector<double>& gammas, const SolverSpec& solver,
    int workers = 1);

}  // namespace wigtom::recon
