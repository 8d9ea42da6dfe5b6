#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "wigtom/detector.hpp"

namespace wigtom::forward {

/// The family of thermal probes: mean photon numbers nbar_j, j = 0..n0.
/// Probe count equals n0+1 so the probe-response system is square.
struct ThermalProbeSet {
  std::vector<double> nbars;
  int pmf_cutoff = 51;  // Fock terms used when synthesizing click data

  int n0() const { return static_cast<int>(nbars.size()) - 1; }

  static ThermalProbeSet linspace(int count, double lo, double hi,
                                  int pmf_cutoff);
  void validate() const;
};

/// Square matrix of thermal photon-number probabilities p_n^{(j)}.
struct ResponseMatrix {
  Eigen::MatrixXd entries;  // row j, column n
  double condition_estimate = 0.0;
};

/// Displacement amplitudes probed along the real line.
struct PhaseGrid {
  std::vector<double> alphas;

  static PhaseGrid uniform(int count, double lo, double hi);
  /// Quadratic spacing: dense near the origin, sparse at the edges.
  static PhaseGrid dense_origin(int count, double lo, double hi);
};

/// Amplitude noise on the local oscillator and how often to average it.
struct NoiseConfig {
  double sigma_fraction = 0.0;  // stddev of delta d_i is fraction * alpha_i^2
  int iterations = 1;
  std::uint64_t seed = 0;
};

/// Pi^alpha_{M_k}: outcome-k probabilities for displaced Fock inputs.
/// Produced both by the ground-truth forward map and by the solver.
struct FockResponseVector {
  Eigen::VectorXd entries;
  double alpha = 0.0;
  int outcome_index = 0;
  /// Displaced-Fock mass beyond the detector cutoff at the worst n;
  /// above the configured tolerance this is a truncation-validity warning.
  double tail_mass = 0.0;
};

/// Outcome-k probabilities (or sampled frequencies) across probes at one
/// displacement.
struct ClickStatistics {
  double alpha_nominal = 0.0;
  double alpha_actual = 0.0;
  int outcome_index = 0;
  Eigen::VectorXd q;
  std::optional<std::uint64_t> shots;
};

ResponseMatrix build_response_matrix(const ThermalProbeSet& probes);

FockResponseVector fock_response_vector(const detector::PovmElement& element,
                                        double alpha, int n0);

/// q_j = sum_n p_n^{(j)} Pi_n with the sum running to the probe set's
/// pmf_cutoff, so synthetic data carries the genuine truncation error the
/// solver has to tolerate.
ClickStatistics click_statistics(const detector::PovmElement& element,
                                 const ThermalProbeSet& probes, double alpha);

/// alpha_i -> alpha_i + delta d_i, delta d_i ~ N(0, sigma_fraction *
/// alpha_i^2), deterministic in (seed, iteration, i).
PhaseGrid apply_lo_noise(const PhaseGrid& grid, const NoiseConfig& cfg,
                         int iteration);

/// Replaces each probability with a binomial(shots, q)/shots draw.
ClickStatistics sample_shots(const ClickStatistics& stats, std::uint64_t shots,
                             std::uint64_t seed);

}  // namespace wigtom::forward
