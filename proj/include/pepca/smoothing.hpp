#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace pepca {

// Smoothing strength. mu = 0 selects exact (unsmoothed) evaluation wherever
// a smoothed form is defined.
struct SmoothingParams {
  double mu = 0.0;

  SmoothingParams() = default;
  explicit SmoothingParams(double mu_in) : mu(mu_in) {
    if (!std::isfinite(mu) || mu < 0.0)
      throw std::invalid_argument("smoothing parameter mu must be finite and >= 0");
  }
};

// Convex piecewise-affine function z -> max_i (A [z; 1])_i. Each row of the
// coefficient matrix is one affine piece: slope coefficients first, constant
// term in the last column.
class PiecewiseAffine {
 public:
  explicit PiecewiseAffine(Eigen::MatrixXd coefficients)
      : coefficients_(std::move(coefficients)) {
    if (coefficients_.rows() < 1 || coefficients_.cols() < 2)
      throw std::invalid_argument(
          "piecewise-affine coefficients must be k x (q+1) with k >= 1 pieces and arity q >= 1");
    if (!coefficients_.allFinite())
      throw std::invalid_argument("piecewise-affine coefficients must be finite");
  }

  Eigen::Index pieces() const { return coefficients_.rows(); }
  Eigen::Index arity() const { return coefficients_.cols() - 1; }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }

  // |z| as the two pieces max(z, -z)
  static PiecewiseAffine absolute_value() {
    Eigen::MatrixXd a(2, 2);
    a << -1.0, 0.0,
          1.0, 0.0;
    return PiecewiseAffine(std::move(a));
  }

 private:
  Eigen::MatrixXd coefficients_;
};

namespace detail {

inline Eigen::VectorXd affine_values(const PiecewiseAffine& f, const Eigen::VectorXd& z) {
  if (z.size() != f.arity())
    throw std::invalid_argument("argument length does not match piecewise-affine arity");
  if (!z.allFinite())
    throw std::invalid_argument("piecewise-affine argument must be finite");
  const Eigen::MatrixXd& a = f.coefficients();
  return a.leftCols(a.cols() - 1) * z + a.col(a.cols() - 1);
}

// ln 2 from the same routine used below, so gap computations cancel exactly.
inline const double kLn2 = std::log1p(1.0);

}  // namespace detail

inline double pwa_eval(const PiecewiseAffine& f, const Eigen::VectorXd& z) {
  return detail::affine_values(f, z).maxCoeff();
}

// Entropy-prox surrogate mu * log(mean_i exp(a_i / mu)). The row maximum is
// factored out before exponentiation so large |a_i| / mu cannot overflow;
// the surrogate underestimates the max by at most mu * log(pieces).
inline double entropy_smooth_eval(const PiecewiseAffine& f, const Eigen::VectorXd& z,
                                  SmoothingParams p) {
  const Eigen::VectorXd values = detail::affine_values(f, z);
  const double top = values.maxCoeff();
  if (p.mu == 0.0) return top;
  const double mean_exp = ((values.array() - top) / p.mu).exp().mean();
  return top + p.mu * std::log(mean_exp);
}

// Smoothed absolute value mu * log((exp(-z/mu) + exp(z/mu)) / 2), evaluated
// as |z| + mu * (log1p(exp(-2|z|/mu)) - ln 2). This form never overflows, is
// even in z by construction, and sits in [|z| - mu ln 2, |z|].
inline double smooth_abs(double z, SmoothingParams p) {
  if (!std::isfinite(z)) throw std::invalid_argument("smooth_abs requires a finite argument");
  const double a = std::abs(z);
  if (p.mu == 0.0) return a;
  return a + p.mu * (std::log1p(std::exp(-2.0 * a / p.mu)) - detail::kLn2);
}

// d/dz of smooth_abs: tanh(z / mu). Only defined for mu > 0; the exact
// subgradient of |z| belongs to the solver, not here.
inline double smooth_abs_grad(double z, SmoothingParams p) {
  if (!std::isfinite(z)) throw std::invalid_argument("smooth_abs_grad requires a finite argument");
  if (p.mu <= 0.0) throw std::invalid_argument("smooth_abs_grad requires mu > 0");
  return std::tanh(z / p.mu);
}

// Elementwise smoothed L1 norm, accumulated left to right.
inline double smooth_l1(const Eigen::VectorXd& v, SmoothingParams p) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) total += smooth_abs(v[i], p);
  return total;
}

}  // namespace pepca
