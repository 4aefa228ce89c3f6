#include "pepca/genotype.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "pepca/errors.hpp"

namespace pepca {

GenotypeMatrix::GenotypeMatrix(Eigen::MatrixXd dosages, std::vector<std::string> subject_ids,
                               std::vector<std::string> variant_ids)
    : dosages_(std::move(dosages)),
      subject_ids_(std::move(subject_ids)),
      variant_ids_(std::move(variant_ids)) {
  if (dosages_.rows() < 1 || dosages_.cols() < 1)
    throw std::invalid_argument("genotype matrix must have at least one subject and one variant");
  if (static_cast<Eigen::Index>(subject_ids_.size()) != dosages_.rows())
    throw std::invalid_argument("subject id count does not match dosage rows");
  if (variant_ids_.empty()) {
    variant_ids_.reserve(static_cast<std::size_t>(dosages_.cols()));
    for (Eigen::Index j = 0; j < dosages_.cols(); ++j)
      variant_ids_.push_back("v" + std::to_string(j + 1));
  }
  if (static_cast<Eigen::Index>(variant_ids_.size()) != dosages_.cols())
    throw std::invalid_argument("variant id count does not match dosage columns");

  std::unordered_set<std::string> seen;
  for (const std::string& id : subject_ids_)
    if (!seen.insert(id).second)
      throw std::invalid_argument("duplicate subject id '" + id + "'");

  for (Eigen::Index i = 0; i < dosages_.rows(); ++i)
    for (Eigen::Index j = 0; j < dosages_.cols(); ++j) {
      const double x = dosages_(i, j);
      if (!std::isnan(x) && x != 0.0 && x != 1.0 && x != 2.0)
        throw std::invalid_argument("dosages must be 0, 1, 2, or missing");
    }

  canonical_order_.resize(subject_ids_.size());
  std::iota(canonical_order_.begin(), canonical_order_.end(), Eigen::Index{0});
  std::sort(canonical_order_.begin(), canonical_order_.end(),
            [this](Eigen::Index a, Eigen::Index b) { return subject_ids_[a] < subject_ids_[b]; });
}

SimilarityMatrix compute_grm(const GenotypeMatrix& g) {
  const Eigen::Index n = g.n_subjects();
  const Eigen::Index m = g.n_variants();
  if (n < 2) throw std::invalid_argument("relationship matrix needs at least two subjects");

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index retained = 0;

  for (Eigen::Index variant = 0; variant < m; ++variant) {
    double observed_sum = 0.0;
    Eigen::Index observed = 0;
    for (const Eigen::Index j : g.canonical_order()) {
      const double x = g.dosages()(j, variant);
      if (!std::isnan(x)) {
        observed_sum += x;
        ++observed;
      }
    }
    if (observed == 0) continue;  // nothing to impute from
    const double imputed = observed_sum / static_cast<double>(observed);

    Eigen::VectorXd column(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = g.dosages()(j, variant);
      column[j] = std::isnan(x) ? imputed : x;
    }

    double total = 0.0;
    for (const Eigen::Index j : g.canonical_order()) total += column[j];
    const double freq = total / (2.0 * static_cast<double>(n));
    if (freq <= 0.0 || freq >= 1.0) continue;  // monomorphic, carries no signal

    const Eigen::VectorXd centered = column.array() - 2.0 * freq;
    const double denom = 2.0 * freq * (1.0 - freq);
    acc.noalias() += (centered * centered.transpose()) / denom;
    ++retained;
  }

  if (retained == 0)
    throw DataError("no informative variants: every variant is monomorphic or fully missing");
  return SimilarityMatrix(acc / static_cast<double>(retained));
}

}  // namespace pepca
