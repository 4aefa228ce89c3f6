#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "pepca/similarity.hpp"

namespace pepca {

// Subjects x variants dosage matrix. Entries are 0, 1, 2, or NaN for
// missing. Variant ids are autogenerated as v1..vm when omitted.
class GenotypeMatrix {
 public:
  GenotypeMatrix(Eigen::MatrixXd dosages, std::vector<std::string> subject_ids,
                 std::vector<std::string> variant_ids = {});

  Eigen::Index n_subjects() const { return dosages_.rows(); }
  Eigen::Index n_variants() const { return dosages_.cols(); }
  const Eigen::MatrixXd& dosages() const { return dosages_; }
  const std::vector<std::string>& subject_ids() const { return subject_ids_; }
  const std::vector<std::string>& variant_ids() const { return variant_ids_; }
  // subject row indices sorted by id; reductions iterate in this order
  const std::vector<Eigen::Index>& canonical_order() const { return canonical_order_; }

 private:
  Eigen::MatrixXd dosages_;
  std::vector<std::string> subject_ids_;
  std::vector<std::string> variant_ids_;
  std::vector<Eigen::Index> canonical_order_;
};

// Genetic relationship matrix: per variant, missing dosages are mean-imputed,
// the allele frequency p is taken from the imputed column, monomorphic
// variants (p = 0 or 1) and fully-missing columns are dropped, and the
// centered, variance-normalized outer products are averaged in column order.
// Throws DataError when no variant survives.
SimilarityMatrix compute_grm(const GenotypeMatrix& g);

}  // namespace pepca
