#include "wigtom/fockspace.hpp"

#include <cmath>
#include <string>

#include "wigtom/errors.hpp"

namespace wigtom::fock {

void TruncationConfig::validate() const {
  if (m0 < 0 || n0 < 0) {
    throw ConfigError("truncation orders must be non-negative");
  }
  if (hilbert_dim <= m0 || hilbert_dim <= n0) {
    throw ConfigError("hilbert_dim must exceed both m0 and n0 (got dim=" +
                      std::to_string(hilbert_dim) + ", m0=" +
                      std::to_string(m0) + ", n0=" + std::to_string(n0) + ")");
  }
  if (tail_tol <= 0) {
    throw ConfigError("tail tolerance must be positive");
  }
}

namespace {

void check_degree(int m, int max_degree, const char* what) {
  if (m < 0) throw DomainError(std::string(what) + ": negative degree");
  if (m > max_degree) {
    throw DegreeOverflowError(std::string(what) + ": degree " +
                              std::to_string(m) + " exceeds maximum " +
                              std::to_string(max_degree));
  }
}

}  // namespace

double laguerre(int m, double x, int max_degree) {
  return assoc_laguerre(m, 0, x, max_degree);
}

double assoc_laguerre(int n, int k, double x, int max_degree) {
  check_degree(n, max_degree, "assoc_laguerre");
  if (k < 0) throw DomainError("assoc_laguerre: negative superscript");
  // Degree-50 recurrences lose a few digits in double; run in long double.
  long double prev = 1.0L;  // L_0
  if (n == 0) return 1.0;
  long double cur = 1.0L + static_cast<long double>(k) - x;  // L_1
  for (int j = 1; j < n; ++j) {
    long double next =
        ((2.0L * j + k + 1.0L - x) * cur - (j + static_cast<long double>(k)) * prev) /
        (j + 1.0L);
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

double displaced_fock_overlap(int m, int n, double alpha_sq) {
  if (alpha_sq < 0) {
    throw DomainError("displaced_fock_overlap: alpha_sq must be >= 0");
  }
  if (m < 0 || n < 0) {
    throw DomainError("displaced_fock_overlap: negative Fock index");
  }
  const int lo = m < n ? m : n;
  const int hi = m < n ? n : m;
  const int d = hi - lo;
  if (alpha_sq == 0.0) return d == 0 ? 1.0 : 0.0;
  // |<m|D|n>|^2 = e^{-x} (lo!/hi!) x^d [L_lo^{(d)}(x)]^2. The factorial
  // ratio goes through log space; hi! overflows past 170 otherwise.
  const double lg = std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0);
  const double l = assoc_laguerre(lo, d, alpha_sq);
  const double v = std::exp(lg + d * std::log(alpha_sq) - alpha_sq) * l * l;
  return v < 1.0 ? v : 1.0;
}

Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int dim) {
  if (dim < 2) throw DomainError("displacement_matrix: dim must be >= 2");
  using Mat = Eigen::MatrixXcd;
  const std::complex<double> i1(0.0, 1.0);
  // G = alpha a^dag - conj(alpha) a is anti-Hermitian, so H = iG is
  // Hermitian and exp(G) = V exp(-i diag(lambda)) V^dag.
  Mat h = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    h(n, n - 1) = i1 * (alpha * s);           // i * alpha a^dag
    h(n - 1, n) = -i1 * (std::conj(alpha) * s);  // -i * conj(alpha) a
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXcd phases(dim);
  for (int j = 0; j < dim; ++j) {
    phases(j) = std::exp(-i1 * es.eigenvalues()(j));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ThermalPmf thermal_pmf(double nbar, int n_max) {
  if (nbar < 0) throw DomainError("thermal_pmf: nbar must be >= 0");
  if (n_max < 0) throw DomainError("thermal_pmf: n_max must be >= 0");
  ThermalPmf out;
  out.p.resize(n_max + 1);
  const double r = nbar / (1.0 + nbar);
  out.p[0] = 1.0 / (1.0 + nbar);
  for (int n = 1; n <= n_max; ++n) out.p[n] = out.p[n - 1] * r;
  out.tail_mass = std::pow(r, n_max + 1);
  return out;
}

double binomial_loss(int k, int m, double eta) {
  if (k < 0 || m < 0 || k > m) {
    throw DomainError("binomial_loss: requires 0 <= k <= m");
  }
  if (eta < 0.0 || eta > 1.0) {
    throw DomainError("binomial_loss: eta must lie in [0, 1]");
  }
  if (eta == 1.0) return k == m ? 1.0 : 0.0;
  if (eta == 0.0) return k == 0 ? 1.0 : 0.0;
  const double lg = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(m - k + 1.0);
  const double v = std::exp(lg + k * std::log(eta) + (m - k) * std::log1p(-eta));
  return v < 1.0 ? v : 1.0;
}

}  // namespace wigtom::fock
