#pragma once

#include <Eigen/Core>
#include <vector>

#include "pepca/similarity.hpp"
#include "pepca/solver.hpp"

namespace pepca {

// Ordered leading penalized eigenpairs plus the configuration that produced
// them. deflated_from records the dimension of the original matrix.
struct Spectrum {
  std::vector<PenalizedEigenpair> pairs;
  Eigen::Index deflated_from = 0;
  SolverConfig config;
};

// v^T X v
double rayleigh(const SimilarityMatrix& x, const UnitVector& v);

// Rank-one downdate X - alpha v v^T, re-symmetrized on construction.
SimilarityMatrix deflate(const SimilarityMatrix& x, const UnitVector& v, double alpha);

// Extracts k leading penalized eigenpairs by solve / deflate cycles. Each
// pair's rayleigh value is taken against the matrix it was extracted from.
Spectrum solve_top_k(const SimilarityMatrix& q, int k, const SolverConfig& cfg);

}  // namespace pepca
