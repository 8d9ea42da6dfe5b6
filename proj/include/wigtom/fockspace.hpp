#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace wigtom::fock {

/// Highest polynomial degree the Laguerre recurrences accept.
inline constexpr int kMaxLaguerreDegree = 200;

/// Cutoffs shared by the forward models and the inverse problem.
///
/// hilbert_dim is the Fock-basis size, n0 the order at which the
/// alternating Wigner sum is truncated, m0 the photon number at which the
/// detector model saturates.
struct TruncationConfig {
  int hilbert_dim = 51;
  int n0 = 49;
  int m0 = 50;
  double tail_tol = 1e-9;

  void validate() const;  // throws ConfigError on violated invariants
};

/// Laguerre polynomial L_m(x) by the three-term recurrence.
double laguerre(int m, double x, int max_degree = kMaxLaguerreDegree);

/// Associated Laguerre polynomial L_n^{(k)}(x); reduces to laguerre at k=0.
double assoc_laguerre(int n, int k, double x,
                      int max_degree = kMaxLaguerreDegree);

/// |<m|D(alpha)|n>|^2 as a closed form in x = |alpha|^2. Symmetric in
/// (m, n); a probability in [0, 1].
double displaced_fock_overlap(int m, int n, double alpha_sq);

/// Displacement operator D(alpha) on a dim-dimensional Fock space, built by
/// exponentiating the truncated generator. Test oracle; the closed-form
/// overlaps are the production path.
Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int dim);

/// Bose-Einstein distribution of a thermal state, entries 0..n_max, plus
/// the analytically known mass beyond the cutoff.
struct ThermalPmf {
  std::vector<double> p;
  double tail_mass = 0.0;
};
ThermalPmf thermal_pmf(double nbar, int n_max);

/// p(k|m) = C(m,k) eta^k (1-eta)^(m-k), the binomial loss channel of a
/// detector with efficiency eta.
double binomial_loss(int k, int m, double eta);

}  // namespace wigtom::fock
