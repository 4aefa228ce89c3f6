#include "pepca/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace pepca {

namespace {

void check_aligned(const Embedding& e, const ClusterAssignment& a) {
  if (e.count() != a.count())
    throw std::invalid_argument("label count does not match embedding point count");
}

}  // namespace

Embedding::Embedding(Eigen::MatrixXd points, std::vector<std::string> ids)
    : points_(std::move(points)), ids_(std::move(ids)) {
  if (points_.rows() < 1 || points_.cols() < 1)
    throw std::invalid_argument("embedding must contain at least one point and one dimension");
  if (static_cast<Eigen::Index>(ids_.size()) != points_.rows())
    throw std::invalid_argument("embedding id count does not match point count");
  if (!points_.allFinite()) throw std::invalid_argument("embedding coordinates must be finite");

  std::unordered_set<std::string> seen;
  for (const std::string& id : ids_)
    if (!seen.insert(id).second)
      throw std::invalid_argument("duplicate subject id '" + id + "' in embedding");

  canonical_order_.resize(ids_.size());
  std::iota(canonical_order_.begin(), canonical_order_.end(), Eigen::Index{0});
  std::sort(canonical_order_.begin(), canonical_order_.end(),
            [this](Eigen::Index a, Eigen::Index b) { return ids_[a] < ids_[b]; });
}

ClusterAssignment::ClusterAssignment(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("cluster assignment must be non-empty");
  cluster_names_ = labels_;
  std::sort(cluster_names_.begin(), cluster_names_.end());
  cluster_names_.erase(std::unique(cluster_names_.begin(), cluster_names_.end()),
                       cluster_names_.end());
  membership_.reserve(labels_.size());
  for (const std::string& label : labels_) {
    const auto it = std::lower_bound(cluster_names_.begin(), cluster_names_.end(), label);
    membership_.push_back(static_cast<int>(it - cluster_names_.begin()));
  }
}

ClusterMeans cluster_means(const Embedding& e, const ClusterAssignment& a) {
  check_aligned(e, a);
  const int k = a.cluster_count();
  const Eigen::Index d = e.dim();

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  Eigen::VectorXd grand_sum = Eigen::VectorXd::Zero(d);
  for (const Eigen::Index idx : e.canonical_order()) {
    sums.row(a.cluster_of(idx)) += e.points().row(idx);
    grand_sum += e.points().row(idx).transpose();
    ++counts[static_cast<std::size_t>(a.cluster_of(idx))];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0)
      throw std::invalid_argument("cluster '" + a.cluster_names()[static_cast<std::size_t>(c)] +
                                  "' has no members");
    sums.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  return ClusterMeans{std::move(sums), grand_sum / static_cast<double>(e.count())};
}

double ss_within(const Embedding& e, const ClusterAssignment& a) {
  const ClusterMeans means = cluster_means(e, a);
  double total = 0.0;
  for (const Eigen::Index idx : e.canonical_order())
    total += (e.points().row(idx) - means.cluster.row(a.cluster_of(idx))).squaredNorm();
  return total;
}

double ss_between(const Embedding& e, const ClusterAssignment& a) {
  const ClusterMeans means = cluster_means(e, a);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(a.cluster_count()), 0);
  for (const Eigen::Index idx : e.canonical_order())
    ++counts[static_cast<std::size_t>(a.cluster_of(idx))];
  double total = 0.0;
  for (int c = 0; c < a.cluster_count(); ++c)
    total += static_cast<double>(counts[static_cast<std::size_t>(c)]) *
             (means.cluster.row(c) - means.grand.transpose()).squaredNorm();
  return total;
}

double silhouette_point(const Embedding& e, const ClusterAssignment& a, Eigen::Index i) {
  check_aligned(e, a);
  if (i < 0 || i >= e.count()) throw std::invalid_argument("silhouette point index out of range");
  if (a.cluster_count() < 2)
    throw std::invalid_argument("silhouette requires at least two clusters");

  const int k = a.cluster_count();
  const int own = a.cluster_of(i);
  std::vector<double> dist_sums(static_cast<std::size_t>(k), 0.0);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (const Eigen::Index idx : e.canonical_order()) {
    const int c = a.cluster_of(idx);
    ++counts[static_cast<std::size_t>(c)];
    if (idx == i) continue;
    dist_sums[static_cast<std::size_t>(c)] += (e.points().row(idx) - e.points().row(i)).norm();
  }

  if (counts[static_cast<std::size_t>(own)] == 1) return 0.0;  // singleton convention
  const double a_i = dist_sums[static_cast<std::size_t>(own)] /
                     static_cast<double>(counts[static_cast<std::size_t>(own)] - 1);
  double b_i = std::numeric_limits<double>::infinity();
  for (int c = 0; c < k; ++c) {
    if (c == own) continue;
    const double mean_dist =
        dist_sums[static_cast<std::size_t>(c)] / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    if (mean_dist < b_i) b_i = mean_dist;
  }

  const double denom = std::max(a_i, b_i);
  if (denom == 0.0) return 0.0;  // all relevant points coincide
  return (b_i - a_i) / denom;
}

double silhouette_mean(const Embedding& e, const ClusterAssignment& a) {
  double total = 0.0;
  for (const Eigen::Index idx : e.canonical_order()) total += silhouette_point(e, a, idx);
  return total / static_cast<double>(e.count());
}

}  // namespace pepca
