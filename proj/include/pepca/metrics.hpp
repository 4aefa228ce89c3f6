#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace pepca {

// n points in d dimensions with unique subject ids. canonical_order() lists
// row indices sorted by id; every reduction in the metrics below iterates in
// that order, so permuting rows (with their ids) reproduces the original
// arithmetic bit for bit.
class Embedding {
 public:
  Embedding(Eigen::MatrixXd points, std::vector<std::string> ids);

  Eigen::Index count() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<Eigen::Index>& canonical_order() const { return canonical_order_; }

 private:
  Eigen::MatrixXd points_;
  std::vector<std::string> ids_;
  std::vector<Eigen::Index> canonical_order_;
};

// Row-aligned cluster labels. Cluster identity is the label string; clusters
// are indexed in sorted-label order and are non-empty by construction.
class ClusterAssignment {
 public:
  explicit ClusterAssignment(std::vector<std::string> labels);

  Eigen::Index count() const { return static_cast<Eigen::Index>(labels_.size()); }
  int cluster_count() const { return static_cast<int>(cluster_names_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& cluster_names() const { return cluster_names_; }
  int cluster_of(Eigen::Index point) const { return membership_[point]; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> cluster_names_;
  std::vector<int> membership_;
};

struct ClusterMeans {
  Eigen::MatrixXd cluster;  // one row per cluster, sorted-label order
  Eigen::VectorXd grand;
};

ClusterMeans cluster_means(const Embedding& e, const ClusterAssignment& a);

// sum over clusters of squared distances of members to their cluster mean
double ss_within(const Embedding& e, const ClusterAssignment& a);

// sum over clusters of |C| * squared distance of cluster mean to grand mean
double ss_between(const Embedding& e, const ClusterAssignment& a);

// (b - a) / max(a, b) with the usual conventions: singletons score 0, and
// 0/0 (coincident points) scores 0. Requires at least two clusters.
double silhouette_point(const Embedding& e, const ClusterAssignment& a, Eigen::Index i);

double silhouette_mean(const Embedding& e, const ClusterAssignment& a);

}  // namespace pepca
