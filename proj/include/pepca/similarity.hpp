#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <utility>

namespace pepca {

// Dense symmetric kernel of the quadratic form. Construction symmetrizes the
// input as (X + X^T) / 2; entries must be finite and the matrix square.
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
      throw std::invalid_argument("similarity matrix must be square and non-empty");
    if (!entries_.allFinite())
      throw std::invalid_argument("similarity matrix entries must be finite");
    entries_ = ((entries_ + entries_.transpose()) * 0.5).eval();
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

// Vector on the unit sphere; construction normalizes, so the invariant holds
// to machine precision for any finite nonzero input.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) throw std::invalid_argument("unit vector must be non-empty");
    if (!coords_.allFinite()) throw std::invalid_argument("unit vector coordinates must be finite");
    const double norm = coords_.norm();
    if (norm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    coords_ /= norm;
  }

  Eigen::Index size() const { return coords_.size(); }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  // Sign flip without renormalization: negation preserves the norm bit for
  // bit, so flip-then-flip is an exact involution.
  UnitVector negated() const {
    UnitVector out(*this);
    out.coords_ = -out.coords_;
    return out;
  }

 private:
  Eigen::VectorXd coords_;
};

}  // namespace pepca
