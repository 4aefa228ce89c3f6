#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pepca/similarity.hpp"

namespace pepca {

struct SolverConfig {
  double lambda = 0.0;  // L1 penalty weight; negative values reward density
  double mu = 0.0;      // smoothing strength, 0 = exact penalty
  double tol = 1e-8;    // tangent-gradient tolerance, relative to max(1, |objective|)
  int max_iter = 500;
  int restarts = 0;     // extra random-direction starts beyond the deterministic warm start
  std::uint64_t seed = 0;

  void validate() const;
};

struct PenalizedEigenpair {
  UnitVector vector;
  double rayleigh = 0.0;   // v^T Q v
  double objective = 0.0;  // penalized objective at v
  double lambda = 0.0;
  double mu = 0.0;
  bool converged = false;  // true iff the tangent-gradient test fired
  int iterations = 0;
};

// Accepted-iterate diagnostics for the deterministic (first) start.
struct SolveTrace {
  std::vector<double> objectives;
  std::vector<double> iterate_norms;
};

// v^T Q v - lambda * ||v||_1
double objective_unsmoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v, double lambda);
// v^T Q v - lambda * sum_i smooth_abs(v_i, mu); requires mu > 0
double objective_smoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v, double lambda,
                          double mu);
// 2 Q v - lambda * tanh(v_i / mu); requires mu > 0
Eigen::VectorXd gradient_smoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v,
                                  double lambda, double mu);
// 2 Q v - lambda * sign(v_i), sign(0) = 0
Eigen::VectorXd subgradient_unsmoothed(const SimilarityMatrix& q, const Eigen::VectorXd& v,
                                       double lambda);

inline double objective_unsmoothed(const SimilarityMatrix& q, const UnitVector& v, double lambda) {
  return objective_unsmoothed(q, v.coords(), lambda);
}
inline double objective_smoothed(const SimilarityMatrix& q, const UnitVector& v, double lambda,
                                 double mu) {
  return objective_smoothed(q, v.coords(), lambda, mu);
}

// Tangent projection (I - v v^T) g at v.
Eigen::VectorXd spherical_step(const UnitVector& v, const Eigen::VectorXd& g);

// Deterministic start: normalized all-ones refined by 50 power iterations on
// Q + sI, s the largest absolute row sum (so the shifted matrix is PSD).
UnitVector warm_start(const SimilarityMatrix& q);

// Flips v so its largest-magnitude entry (ties: lowest index) is positive.
UnitVector canonical_sign(const UnitVector& v);

// Maximizes the penalized objective over the unit sphere by BFGS-style
// ascent with backtracking line search and renormalization retraction.
PenalizedEigenpair solve_leading(const SimilarityMatrix& q, const SolverConfig& cfg,
                                 SolveTrace* trace = nullptr);

}  // namespace pepca
