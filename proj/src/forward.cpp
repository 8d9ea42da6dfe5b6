#include "wigtom/forward.hpp"

#include <Eigen/SVD>
#include <bit>
#include <cmath>
#include <limits>

#include "wigtom/errors.hpp"
#include "wigtom/fockspace.hpp"
#include "wigtom/rng.hpp"

namespace wigtom::forward {

ThermalProbeSet ThermalProbeSet::linspace(int count, double lo, double hi,
                                          int pmf_cutoff) {
  if (count < 1) throw DomainError("probe set needs at least one probe");
  ThermalProbeSet set;
  set.pmf_cutoff = pmf_cutoff;
  set.nbars.resize(count);
  if (count == 1) {
    set.nbars[0] = lo;
  } else {
    const double step = (hi - lo) / (count - 1);
    for (int j = 0; j < count; ++j) set.nbars[j] = lo + step * j;
  }
  set.validate();
  return set;
}

void ThermalProbeSet::validate() const {
  if (nbars.empty()) throw DomainError("probe set is empty");
  if (nbars[0] < 0) throw DomainError("nbar must be >= 0");
  for (std::size_t j = 1; j < nbars.size(); ++j) {
    if (!(nbars[j] > nbars[j - 1])) {
      throw DomainError(
          "nbars must be strictly increasing (duplicate probes make the "
          "response matrix singular)");
    }
  }
  if (pmf_cutoff < static_cast<int>(nbars.size())) {
    throw DomainError("pmf_cutoff must cover at least n0+1 Fock terms");
  }
}

PhaseGrid PhaseGrid::uniform(int count, double lo, double hi) {
  if (count < 1) throw DomainError("phase grid needs at least one point");
  PhaseGrid g;
  g.alphas.resize(count);
  if (count == 1) {
    g.alphas[0] = lo;
  } else {
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) g.alphas[i] = lo + step * i;
  }
  return g;
}

PhaseGrid PhaseGrid::dense_origin(int count, double lo, double hi) {
  PhaseGrid base = uniform(count, -1.0, 1.0);
  PhaseGrid g;
  g.alphas.resize(count);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < count; ++i) {
    const double t = base.alphas[i];
    g.alphas[i] = mid + half * t * std::abs(t);
  }
  return g;
}

ResponseMatrix build_response_matrix(const ThermalProbeSet& probes) {
  probes.validate();
  const int n = probes.n0() + 1;
  ResponseMatrix rm;
  rm.entries.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const auto pmf = fock::thermal_pmf(probes.nbars[j], n - 1);
    for (int col = 0; col < n; ++col) rm.entries(j, col) = pmf.p[col];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rm.entries);
  const double smin = svd.singularValues()(n - 1);
  rm.condition_estimate = smin > 0.0
                              ? svd.singularValues()(0) / smin
                              : std::numeric_limits<double>::infinity();
  return rm;
}

FockResponseVector fock_response_vector(const detector::PovmElement& element,
                                        double alpha, int n0) {
  if (n0 < 0) throw DomainError("fock_response_vector: n0 must be >= 0");
  const double x = alpha * alpha;
  const int m0 = element.m0();
  FockResponseVector out;
  out.alpha = alpha;
  out.outcome_index = element.outcome_index;
  out.entries.resize(n0 + 1);
  double worst_captured = 1.0;
  for (int n = 0; n <= n0; ++n) {
    double v = 0.0;
    double captured = 0.0;
    for (int m = 0; m <= m0; ++m) {
      const double ov = fock::displaced_fock_overlap(m, n, x);
      captured += ov;
      if (element.weights[m] != 0.0) v += element.weights[m] * ov;
    }
    out.entries(n) = v < 1.0 ? (v > 0.0 ? v : 0.0) : 1.0;
    if (captured < worst_captured) worst_captured = captured;
  }
  out.tail_mass = worst_captured < 1.0 ? 1.0 - worst_captured : 0.0;
  return out;
}

ClickStatistics click_statistics(const detector::PovmElement& element,
                                 const ThermalProbeSet& probes, double alpha) {
  probes.validate();
  const int probe_count = probes.n0() + 1;
  const int terms = probes.pmf_cutoff;
  // Full thermal expansion, not the n0+1 truncation the solver sees.
  const FockResponseVector pi = fock_response_vector(element, alpha, terms - 1);
  ClickStatistics stats;
  stats.alpha_nominal = alpha;
  stats.alpha_actual = alpha;
  stats.outcome_index = element.outcome_index;
  stats.q.resize(probe_count);
  for (int j = 0; j < probe_count; ++j) {
    const auto pmf = fock::thermal_pmf(probes.nbars[j], terms - 1);
    long double acc = 0.0L;
    for (int n = 0; n < terms; ++n) acc += pmf.p[n] * pi.entries(n);
    const double q = static_cast<double>(acc);
    stats.q(j) = q < 1.0 ? (q > 0.0 ? q : 0.0) : 1.0;
  }
  return stats;
}

PhaseGrid apply_lo_noise(const PhaseGrid& grid, const NoiseConfig& cfg,
                         int iteration) {
  PhaseGrid out = grid;
  if (cfg.sigma_fraction == 0.0) return out;
  for (std::size_t i = 0; i < out.alphas.size(); ++i) {
    const double a = grid.alphas[i];
    const double sigma = cfg.sigma_fraction * a * a;
    if (sigma == 0.0) continue;
    rng::Stream s(cfg.seed, rng::Purpose::LoNoise,
                  static_cast<std::uint64_t>(iteration), i);
    out.alphas[i] = a + s.normal(0.0, sigma);
  }
  return out;
}

ClickStatistics sample_shots(const ClickStatistics& stats, std::uint64_t shots,
                             std::uint64_t seed) {
  if (shots == 0) throw DomainError("sample_shots: shots must be positive");
  ClickStatistics out = stats;
  out.shots = shots;
  const std::uint64_t stream =
      rng::mix64(static_cast<std::uint64_t>(stats.outcome_index) ^
                 std::bit_cast<std::uint64_t>(stats.alpha_nominal));
  for (int j = 0; j < stats.q.size(); ++j) {
    rng::Stream s(seed, rng::Purpose::Shots, stream,
                  static_cast<std::uint64_t>(j));
    out.q(j) = static_cast<double>(s.binomial(shots, stats.q(j))) /
               static_cast<double>(shots);
  }
  return out;
}

}  // namespace wigtom::forward
