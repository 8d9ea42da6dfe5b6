#include "wigtom/qp.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace wigtom::qp {

namespace {

constexpr double kTieBreakGamma = 1e-12;
constexpr double kFeasTol = 1e-12;

double effective_gamma(const QpProblem& p, bool* lifted = nullptr) {
  if (p.gamma > 0.0) {
    if (lifted) *lifted = false;
    return p.gamma;
  }
  if (lifted) *lifted = true;
  return kTieBreakGamma;
}

double squared_objective(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                         double g, const Eigen::VectorXd& x) {
  return (q - P * x).squaredNorm() + g * g * x.squaredNorm();
}

Eigen::VectorXd squared_gradient(const Eigen::MatrixXd& P,
                                 const Eigen::VectorXd& q, double g,
                                 const Eigen::VectorXd& x) {
  return 2.0 * (P.transpose() * (P * x - q)) + (2.0 * g * g) * x;
}

double stated_objective(const QpProblem& p, const Eigen::VectorXd& x) {
  const double r = (p.q - p.P * x).norm();
  const double n = x.norm();
  if (p.squared_form) return r * r + p.gamma * p.gamma * n * n;
  return r + p.gamma * n;
}

Eigen::VectorXd stated_gradient(const QpProblem& p, const Eigen::VectorXd& x) {
  if (p.squared_form) return squared_gradient(p.P, p.q, p.gamma, x);
  const Eigen::VectorXd res = p.P * x - p.q;
  const double r = std::max(res.norm(), 1e-12);
  const double n = std::max(x.norm(), 1e-12);
  return p.P.transpose() * res / r + (p.gamma / n) * x;
}

double max_violation(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  double v = 0.0;
  double slab = 0.0;
  for (int i = 0; i < n; ++i) {
    v = std::max(v, -x(i));
    v = std::max(v, x(i) - 1.0);
    slab += (i % 2 == 0 ? x(i) : -x(i));
  }
  return std::max(v, std::abs(slab) - 1.0);
}

/// Working set of the active-set iteration.
struct WorkingSet {
  std::vector<int> bound;  // -1 free, 0 at lower, 1 at upper
  int slab = 0;            // 0 inactive, +1 at sum=+1, -1 at sum=-1

  explicit WorkingSet(int n) : bound(n, -1) {}

  std::vector<int> free_indices() const {
    std::vector<int> f;
    for (int i = 0; i < static_cast<int>(bound.size()); ++i) {
      if (bound[i] < 0) f.push_back(i);
    }
    return f;
  }
};

/// Equality-constrained least-squares subproblem on the free variables:
///   min || [P_F; g I] x_F - b ||  subject to  s_F' x_F = b_slab (optional).
/// Solved through QR; the slab row is eliminated with a nullspace basis so
/// the normal equations (and their squared condition number) never appear.
Eigen::VectorXd solve_subproblem(const Eigen::MatrixXd& P,
                                 const Eigen::VectorXd& q, double g,
                                 const Eigen::VectorXd& s,
                                 const Eigen::VectorXd& x,
                                 const WorkingSet& ws,
                                 const std::vector<int>& free) {
  const int n = static_cast<int>(x.size());
  const int f = static_cast<int>(free.size());
  Eigen::VectorXd out = x;
  if (f == 0) return out;

  const int m = static_cast<int>(P.rows());
  Eigen::VectorXd rhs_top = q;
  for (int i = 0; i < n; ++i) {
    if (ws.bound[i] == 1) rhs_top -= P.col(i);  // at upper bound, value 1
  }
  Eigen::MatrixXd a(m + f, f);
  Eigen::VectorXd b(m + f);
  for (int c = 0; c < f; ++c) a.block(0, c, m, 1) = P.col(free[c]);
  a.bottomRows(f) = g * Eigen::MatrixXd::Identity(f, f);
  b.head(m) = rhs_top;
  b.tail(f).setZero();

  if (ws.slab == 0) {
    Eigen::VectorXd xf = a.colPivHouseholderQr().solve(b);
    for (int c = 0; c < f; ++c) out(free[c]) = xf(c);
    return out;
  }

  // Slab active: s_F' x_F must equal the target left over by the bound
  // variables.
  double target = static_cast<double>(ws.slab);
  Eigen::VectorXd sf(f);
  for (int i = 0; i < n; ++i) {
    if (ws.bound[i] == 1) target -= s(i);
  }
  for (int c = 0; c < f; ++c) sf(c) = s(free[c]);

  const double sf2 = sf.squaredNorm();
  Eigen::VectorXd xp = sf * (target / sf2);
  if (f == 1) {
    out(free[0]) = xp(0);
    return out;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_s(sf);
  Eigen::MatrixXd qfull = qr_s.householderQ();
  Eigen::MatrixXd z = qfull.rightCols(f - 1);  // orthonormal basis of sf-perp
  Eigen::VectorXd y =
      (a * z).colPivHouseholderQr().solve(b - a * xp);
  Eigen::VectorXd xf = xp + z * y;
  for (int c = 0; c < f; ++c) out(free[c]) = xf(c);
  return out;
}

std::string describe_active(const WorkingSet& ws) {
  int lo = 0;
  int up = 0;
  for (int b : ws.bound) {
    if (b == 0) ++lo;
    if (b == 1) ++up;
  }
  std::ostringstream os;
  os << lo << " at lower, " << up << " at upper, slab ";
  if (ws.slab == 0) {
    os << "inactive";
  } else {
    os << "at " << (ws.slab > 0 ? "+1" : "-1");
  }
  return os.str();
}

/// FISTA with exact projection; guards against active-set cycling.
int projected_gradient_polish(const QpProblem& problem, double g, double tol,
                              int cap, Eigen::VectorXd& x) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(problem.P);
  const double smax = svd.singularValues()(0);
  const double lip = 2.0 * (smax * smax + g * g);
  Eigen::VectorXd y = x;
  Eigen::VectorXd best = x;
  double best_res = kkt_residual(problem, project_feasible(x));
  double t = 1.0;
  int it = 0;
  for (; it < cap; ++it) {
    Eigen::VectorXd xn =
        project_feasible(y - squared_gradient(problem.P, problem.q, g, y) / lip);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = xn + ((t - 1.0) / tn) * (xn - x);
    x = xn;
    t = tn;
    if (it % 20 == 19) {
      const double res = kkt_residual(problem, x);
      if (res < best_res) {
        best_res = res;
        best = x;
      }
      if (res <= 0.5 * tol) return it + 1;
    }
  }
  x = best;
  return it;
}

Solution solve_squared(const QpProblem& problem, const SolverOptions& options,
                       double g, bool lifted) {
  const int n = problem.dim();
  const Eigen::MatrixXd& P = problem.P;
  const Eigen::VectorXd& q = problem.q;
  const Eigen::VectorXd s = slab_direction(n);
  const int cap =
      options.max_iterations > 0 ? options.max_iterations : 100 * n + 100;

  // Start from the warm-start hint or from a clipped ridge solution; both
  // are projected to feasibility first.
  Eigen::VectorXd x;
  if (options.warm_start && options.warm_start->size() == n) {
    x = project_feasible(*options.warm_start);
  } else {
    const double g0 = std::max(g, 1e-6);
    Eigen::MatrixXd a(P.rows() + n, n);
    a.topRows(P.rows()) = P;
    a.bottomRows(n) = g0 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(P.rows() + n);
    b.head(P.rows()) = q;
    x = project_feasible(a.colPivHouseholderQr().solve(b));
  }

  WorkingSet ws(n);
  for (int i = 0; i < n; ++i) {
    if (x(i) <= 0.0) {
      x(i) = 0.0;
      ws.bound[i] = 0;
    } else if (x(i) >= 1.0) {
      x(i) = 1.0;
      ws.bound[i] = 1;
    }
  }
  {
    const double slab_val = s.dot(x);
    if (slab_val >= 1.0 - 1e-15 && ws.free_indices().size() > 0) ws.slab = 1;
    if (slab_val <= -1.0 + 1e-15 && ws.free_indices().size() > 0) ws.slab = -1;
  }

  int iterations = 0;
  bool optimal = false;
  while (iterations < cap) {
    ++iterations;
    const std::vector<int> free = ws.free_indices();
    if (ws.slab != 0 && free.empty()) ws.slab = 0;  // degenerate row
    Eigen::VectorXd xhat = solve_subproblem(P, q, g, s, x, ws, free);
    Eigen::VectorXd p = xhat - x;

    const double step_scale = 1.0 + xhat.cwiseAbs().maxCoeff();
    if (p.cwiseAbs().maxCoeff() <= 1e-13 * step_scale) {
      // Subproblem optimum reached: examine the Lagrange multipliers.
      const Eigen::VectorXd grad = squared_gradient(P, q, g, x);
      double mu = 0.0;
      if (ws.slab != 0) {
        double num = 0.0;
        double den = 0.0;
        for (int i : free) {
          num += s(i) * grad(i);
          den += s(i) * s(i);
        }
        mu = den > 0.0 ? -num / den : 0.0;
      }
      const double mult_tol = 1e-11 * (1.0 + grad.cwiseAbs().maxCoeff());
      double worst = -mult_tol;
      int worst_idx = -1;  // n encodes the slab
      for (int i = 0; i < n; ++i) {
        if (ws.bound[i] == 0) {
          const double lambda = grad(i) + mu * s(i);
          if (lambda < worst) {
            worst = lambda;
            worst_idx = i;
          }
        } else if (ws.bound[i] == 1) {
          const double lambda = -(grad(i) + mu * s(i));
          if (lambda < worst) {
            worst = lambda;
            worst_idx = i;
          }
        }
      }
      if (ws.slab != 0) {
        const double lambda = ws.slab > 0 ? mu : -mu;
        if (lambda < worst) {
          worst = lambda;
          worst_idx = n;
        }
      }
      if (worst_idx < 0) {
        optimal = true;
        break;
      }
      if (worst_idx == n) {
        ws.slab = 0;
      } else {
        ws.bound[worst_idx] = -1;
      }
      continue;
    }

    // Step toward the subproblem optimum until a constraint outside the
    // working set blocks.
    double t = 1.0;
    int block_idx = -1;  // n encodes the slab
    int block_kind = 0;
    for (int i : free) {
      if (p(i) < -1e-15) {
        const double ti = (0.0 - x(i)) / p(i);
        if (ti < t - 1e-15 || (ti < t + 1e-15 && block_idx > i)) {
          t = std::max(ti, 0.0);
          block_idx = i;
          block_kind = 0;
        }
      } else if (p(i) > 1e-15) {
        const double ti = (1.0 - x(i)) / p(i);
        if (ti < t - 1e-15 || (ti < t + 1e-15 && block_idx > i)) {
          t = std::max(ti, 0.0);
          block_idx = i;
          block_kind = 1;
        }
      }
    }
    if (ws.slab == 0) {
      const double c = s.dot(x);
      const double d = s.dot(p);
      if (d > 1e-15) {
        const double ti = (1.0 - c) / d;
        if (ti < t - 1e-15) {
          t = std::max(ti, 0.0);
          block_idx = n;
          block_kind = 1;
        }
      } else if (d < -1e-15) {
        const double ti = (-1.0 - c) / d;
        if (ti < t - 1e-15) {
          t = std::max(ti, 0.0);
          block_idx = n;
          block_kind = -1;
        }
      }
    }
    x += t * p;
    if (block_idx < 0 || t >= 1.0) continue;
    if (block_idx == n) {
      ws.slab = block_kind;
    } else {
      ws.bound[block_idx] = block_kind;
      x(block_idx) = block_kind == 0 ? 0.0 : 1.0;
    }
  }

  double res = kkt_residual(problem, x);
  if (res > options.tol) {
    iterations += projected_gradient_polish(problem, g, options.tol,
                                            optimal ? 500 : 2000, x);
    res = kkt_residual(problem, x);
  }

  Solution sol;
  sol.pi.entries = x;
  sol.report.objective_value = stated_objective(problem, x);
  sol.report.kkt_residual = res;
  sol.report.iterations = iterations;
  sol.report.active_constraints = describe_active(ws);
  sol.report.tie_break_regularized = lifted;
  sol.report.converged = res <= options.tol;
  if (!sol.report.converged) {
    throw NonConvergenceError(
        "qp solve did not reach tol (kkt residual " + std::to_string(res) +
            " after " + std::to_string(iterations) + " iterations)",
        sol);
  }
  return sol;
}

}  // namespace

void QpProblem::validate() const {
  if (P.rows() < 1 || P.cols() < 1) throw DomainError("qp: empty system");
  if (q.size() != P.rows()) throw DomainError("qp: dimension mismatch");
  if (gamma < 0.0) throw DomainError("qp: gamma must be >= 0");
}

Eigen::VectorXd slab_direction(int dim) {
  Eigen::VectorXd s(dim);
  for (int i = 0; i < dim; ++i) s(i) = (i % 2 == 0) ? 1.0 : -1.0;
  return s;
}

Eigen::VectorXd project_feasible(const Eigen::VectorXd& z) {
  const int n = static_cast<int>(z.size());
  const Eigen::VectorXd s = slab_direction(n);
  auto clamp_shift = [&](double lam) {
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) {
      c(i) = std::clamp(z(i) - lam * s(i), 0.0, 1.0);
    }
    return c;
  };
  Eigen::VectorXd c = clamp_shift(0.0);
  double t = s.dot(c);
  if (std::abs(t) <= 1.0) return c;
  // s' clamp(z - lam s) is non-increasing and piecewise linear in lam;
  // bisect to machine precision.
  const double span = z.cwiseAbs().maxCoeff() + 2.0;
  double lo = t > 1.0 ? 0.0 : -span;
  double hi = t > 1.0 ? span : 0.0;
  const double target = t > 1.0 ? 1.0 : -1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (s.dot(clamp_shift(mid)) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clamp_shift(0.5 * (lo + hi));
}

double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& candidate) {
  problem.validate();
  if (candidate.size() != problem.dim()) {
    throw DomainError("kkt_residual: candidate has wrong dimension");
  }
  const double viol = max_violation(candidate);
  if (viol > kFeasTol) {
    throw InfeasibleError("kkt_residual: candidate infeasible (violation " +
                              std::to_string(viol) + ")",
                          viol);
  }
  const Eigen::VectorXd grad = stated_gradient(problem, candidate);
  return (candidate - project_feasible(candidate - grad)).norm();
}

double condition_report(const Eigen::MatrixXd& P) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

Solution solve(const QpProblem& problem, const SolverOptions& options) {
  problem.validate();
  if (options.tol <= 0.0) throw DomainError("qp: tol must be positive");
  bool lifted = false;
  const double g = effective_gamma(problem, &lifted);

  if (problem.squared_form) return solve_squared(problem, options, g, lifted);

  // Plain-norm objective: majorize-minimize, each step a squared problem
  // with the regularization weight rescaled by the current norms.
  QpProblem inner = problem;
  inner.squared_form = true;
  SolverOptions inner_opts = options;
  Eigen::VectorXd x;
  int total_iters = 0;
  Solution last;
  for (int outer = 0; outer < 200; ++outer) {
    double gi = g;
    if (outer > 0) {
      const double r = std::max((problem.q - problem.P * x).norm(), 1e-12);
      const double nn = std::max(x.norm(), 1e-12);
      gi = std::sqrt(std::max(problem.gamma * r / nn, 1e-24));
    }
    inner.gamma = gi;
    inner_opts.warm_start = outer > 0 ? &x : options.warm_start;
    last = solve_squared(inner, inner_opts, std::max(gi, kTieBreakGamma),
                         lifted);
    total_iters += last.report.iterations;
    if (outer > 0 && (last.pi.entries - x).cwiseAbs().maxCoeff() < 1e-12) {
      x = last.pi.entries;
      break;
    }
    x = last.pi.entries;
  }
  last.report.iterations = total_iters;
  last.report.objective_value = stated_objective(problem, x);
  last.report.kkt_residual = kkt_residual(problem, x);
  last.report.converged = true;
  return last;
}

}  // namespace wigtom::qp
