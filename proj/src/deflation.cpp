#include "pepca/deflation.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "pepca/errors.hpp"

namespace pepca {

double rayleigh(const SimilarityMatrix& x, const UnitVector& v) {
  if (v.size() != x.dim())
    throw std::invalid_argument("vector length does not match similarity matrix dimension");
  return v.coords().dot(x.matrix() * v.coords());
}

SimilarityMatrix deflate(const SimilarityMatrix& x, const UnitVector& v, double alpha) {
  if (v.size() != x.dim())
    throw std::invalid_argument("vector length does not match similarity matrix dimension");
  if (!std::isfinite(alpha)) throw std::invalid_argument("deflation weight must be finite");
  // evaluate the outer product before scaling: v_i * v_j is bitwise symmetric,
  // so alpha * outer stays symmetric and the constructor's re-symmetrization
  // is an exact no-op (folding alpha into one factor would break that)
  const Eigen::MatrixXd outer = v.coords() * v.coords().transpose();
  Eigen::MatrixXd next = x.matrix() - alpha * outer;
  return SimilarityMatrix(std::move(next));
}

Spectrum solve_top_k(const SimilarityMatrix& q, int k, const SolverConfig& cfg) {
  if (k < 1 || k > q.dim())
    throw std::invalid_argument("k must satisfy 1 <= k <= matrix dimension");
  cfg.validate();

  Spectrum out;
  out.deflated_from = q.dim();
  out.config = cfg;
  out.pairs.reserve(static_cast<std::size_t>(k));

  SimilarityMatrix current = q;
  for (int level = 0; level < k; ++level) {
    PenalizedEigenpair pair = [&]() -> PenalizedEigenpair {
      try {
        return solve_leading(current, cfg);
      } catch (const NumericalError& err) {
        throw NumericalError(
            "deflation level " + std::to_string(level + 1) + ": " + err.what(),
            err.iterations());
      }
    }();
    if (level + 1 < k) current = deflate(current, pair.vector, pair.rayleigh);
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

}  // namespace pepca
