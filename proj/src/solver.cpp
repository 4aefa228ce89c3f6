#include "pepca/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "pepca/errors.hpp"
#include "pepca/rng.hpp"
#include "pepca/smoothing.hpp"

namespace pepca {

namespace {

void check_dim(const SimilarityMatrix& q, const Eigen::VectorXd& v) {
  if (v.size() != q.dim())
    throw std::invalid_argument("vector length does not match similarity matrix dimension");
}

double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// objective and ascent gradient for arbitrary (not necessarily unit) v
double eval_objective(const Eigen::MatrixXd& q, const Eigen::VectorXd& v, double lambda,
                      double mu) {
  const double quad = v.dot(q * v);
  const double penalty = mu > 0.0 ? smooth_l1(v, SmoothingParams(mu)) : v.lpNorm<1>();
  return quad - lambda * penalty;
}

Eigen::VectorXd eval_gradient(const Eigen::MatrixXd& q, const Eigen::VectorXd& v, double lambda,
                              double mu) {
  Eigen::VectorXd g = 2.0 * (q * v);
  if (mu > 0.0) {
    for (Eigen::Index i = 0; i < v.size(); ++i) g[i] -= lambda * std::tanh(v[i] / mu);
  } else {
    for (Eigen::Index i = 0; i < v.size(); ++i) g[i] -= lambda * sign0(v[i]);
  }
  return g;
}

struct AscentResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
};

// BFGS-style ascent on the sphere: Euclidean gradient, tangent projection,
// backtracking Armijo search along the renormalized ray, inverse-Hessian
// update on the ambient curvature pair. The approximation resets to the
// identity whenever the curvature condition s^T y <= 1e-12 fails or the
// proposed direction stops being an ascent direction.
AscentResult ascend(const Eigen::MatrixXd& q, Eigen::VectorXd x, const SolverConfig& cfg,
                    SolveTrace* trace) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;
  constexpr double kCurvatureFloor = 1e-12;

  const Eigen::Index n = x.size();
  double f = eval_objective(q, x, cfg.lambda, cfg.mu);
  if (!std::isfinite(f)) throw NumericalError("objective is not finite at the starting point", 0);
  if (trace) {
    trace->objectives.push_back(f);
    trace->iterate_norms.push_back(x.norm());
  }

  Eigen::VectorXd g = eval_gradient(q, x, cfg.lambda, cfg.mu);
  Eigen::VectorXd r = g - x.dot(g) * x;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool h_is_identity = true;

  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iter; ++it) {
    if (r.norm() <= cfg.tol * std::max(1.0, std::abs(f))) {
      converged = true;
      break;
    }

    Eigen::VectorXd d;
    if (h_is_identity) {
      d = r;
    } else {
      d.noalias() = h * r;
      d -= x.dot(d) * x;  // keep the direction tangent
    }
    double slope = r.dot(d);
    if (!(slope > 0.0)) {
      h.setIdentity();
      h_is_identity = true;
      d = r;
      slope = r.squaredNorm();
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_next;
    double f_next = 0.0;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      Eigen::VectorXd candidate = x + step * d;
      const double norm = candidate.norm();
      if (norm > 0.0 && std::isfinite(norm)) {
        candidate /= norm;
        const double f_cand = eval_objective(q, candidate, cfg.lambda, cfg.mu);
        if (std::isnan(f_cand)) throw NumericalError("objective became NaN during ascent", it);
        if (f_cand >= f + kArmijo * step * slope) {
          accepted = true;
          x_next.swap(candidate);
          f_next = f_cand;
          break;
        }
      }
      step *= 0.5;
    }

    if (!accepted) {
      if (!h_is_identity) {
        // quasi-Newton direction failed; retry this iteration as steepest ascent
        h.setIdentity();
        h_is_identity = true;
        continue;
      }
      break;  // no ascent step exists along the steepest direction (kink or optimum)
    }

    Eigen::VectorXd g_next = eval_gradient(q, x_next, cfg.lambda, cfg.mu);
    Eigen::VectorXd r_next = g_next - x_next.dot(g_next) * x_next;

    const Eigen::VectorXd s = x_next - x;
    const Eigen::VectorXd y = r - r_next;  // curvature pair for minimizing -F
    const double sy = s.dot(y);
    if (sy > kCurvatureFloor) {
      const Eigen::VectorXd hy = h * y;
      const double yhy = y.dot(hy);
      const double rho = 1.0 / sy;
      h.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
      h.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
      h_is_identity = false;
    } else {
      h.setIdentity();
      h_is_identity = true;
    }

    x.swap(x_next);
    f = f_next;
    g.swap(g_next);
    r.swap(r_next);
    if (trace) {
      trace->objectives.push_back(f);
      trace->iterate_norms.push_back(x.norm());
    }
  }

  return {std::move(x), f, converged, it};
}

}  // namespace

void SolverConfig::validate() const {
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
  if (!std::isfinite(mu) || mu < 0.0) throw std::invalid_argument("mu must be finite and >= 0");
  if (!std::isfinite(tol) || tol <= 0.0) throw std::invalid_argument("tol must be finite and > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");
}

double objective_unsmoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v, double lambda) {
  check_dim(q, v);
  if (!v.allFinite()) throw std::invalid_argument("objective requires a finite vector");
  return eval_objective(q.matrix(), v, lambda, 0.0);
}

double objective_smoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v, double lambda,
                          double mu) {
  check_dim(q, v);
  if (!v.allFinite()) throw std::invalid_argument("objective requires a finite vector");
  if (mu <= 0.0) throw std::invalid_argument("objective_smoothed requires mu > 0");
  return eval_objective(q.matrix(), v, lambda, mu);
}

Eigen::VectorXd gradient_smoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v,
                                  double lambda, double mu) {
  check_dim(q, v);
  if (!v.allFinite()) throw std::invalid_argument("gradient requires a finite vector");
  if (mu <= 0.0) throw std::invalid_argument("gradient_smoothed requires mu > 0");
  return eval_gradient(q.matrix(), v, lambda, mu);
}

Eigen::VectorXd subgradient_unsmoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v,
                                       double lambda) {
  check_dim(q, v);
  if (!v.allFinite()) throw std::invalid_argument("subgradient requires a finite vector");
  return eval_gradient(q.matrix(), v, lambda, 0.0);
}

Eigen::VectorXd spherical_step(const UnitVector& v, const Eigen::VectorXd& g) {
  if (g.size() != v.size())
    throw std::invalid_argument("gradient length does not match vector length");
  if (!g.allFinite()) throw std::invalid_argument("spherical_step requires a finite gradient");
  const Eigen::VectorXd& x = v.coords();
  return g - x.dot(g) * x;
}

UnitVector warm_start(const SimilarityMatrix& q) {
  const Eigen::MatrixXd& m = q.matrix();
  const Eigen::Index n = q.dim();
  Eigen::VectorXd u = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  const double shift = m.cwiseAbs().rowwise().sum().maxCoeff();
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = m * u + shift * u;
    const double norm = w.norm();
    if (norm == 0.0) break;  // zero matrix with zero shift: the start is already the answer
    u = w / norm;
  }
  return UnitVector(std::move(u));
}

UnitVector canonical_sign(const UnitVector& v) {
  const Eigen::VectorXd& c = v.coords();
  Eigen::Index lead = 0;
  for (Eigen::Index i = 1; i < c.size(); ++i)
    if (std::abs(c[i]) > std::abs(c[lead])) lead = i;
  return c[lead] < 0.0 ? v.negated() : v;
}

PenalizedEigenpair solve_leading(const SimilarityMatrix& q, const SolverConfig& cfg,
                                 SolveTrace* trace) {
  cfg.validate();
  const Eigen::MatrixXd& m = q.matrix();

  std::optional<AscentResult> best;
  Rng rng(cfg.seed);
  for (int start = 0; start <= cfg.restarts; ++start) {
    Eigen::VectorXd x0 =
        start == 0 ? warm_start(q).coords() : rng.unit_vector(q.dim());
    AscentResult run = ascend(m, std::move(x0), cfg, start == 0 ? trace : nullptr);
    if (!best || run.objective > best->objective) best = std::move(run);
  }

  UnitVector v = canonical_sign(UnitVector(std::move(best->x)));
  const double quad = v.coords().dot(m * v.coords());
  PenalizedEigenpair out{std::move(v)};
  out.rayleigh = quad;
  out.objective = best->objective;
  out.lambda = cfg.lambda;
  out.mu = cfg.mu;
  out.converged = best->converged;
  out.iterations = best->iterations;
  return out;
}

}  // namespace pepca
