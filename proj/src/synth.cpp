#include "pepca/synth.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pepca/rng.hpp"

namespace pepca {

namespace {

std::string padded(const char* prefix, std::size_t value, std::size_t max_value) {
  std::string digits = std::to_string(value);
  std::size_t width = std::to_string(max_value).size();
  return prefix + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

SynthResult synth_mixture(const std::vector<int>& n_per_cluster, int d_latent, double separation,
                          double noise, std::uint64_t seed) {
  if (n_per_cluster.empty()) throw std::invalid_argument("need at least one cluster");
  std::size_t n = 0;
  for (const int count : n_per_cluster) {
    if (count < 1) throw std::invalid_argument("every cluster needs at least one point");
    n += static_cast<std::size_t>(count);
  }
  const std::size_t clusters = n_per_cluster.size();
  if (d_latent < static_cast<int>(clusters))
    throw std::invalid_argument(
        "d_latent must be >= the number of clusters for pairwise-equidistant centers");
  if (!std::isfinite(separation) || separation < 0.0)
    throw std::invalid_argument("separation must be finite and >= 0");
  if (!std::isfinite(noise) || noise < 0.0)
    throw std::invalid_argument("noise must be finite and >= 0");

  // scaled standard-basis centers: pairwise distance is exactly `separation`
  const double scale = separation / std::sqrt(2.0);

  Rng rng(seed);
  Eigen::MatrixXd latent(static_cast<Eigen::Index>(n), d_latent);
  std::vector<std::string> ids;
  ids.reserve(n);
  LabelTable labels;

  Eigen::Index row = 0;
  for (std::size_t c = 0; c < clusters; ++c) {
    const std::string label = padded("c", c + 1, clusters);
    for (int p = 0; p < n_per_cluster[c]; ++p, ++row) {
      for (int d = 0; d < d_latent; ++d) latent(row, d) = noise * rng.gaussian();
      latent(row, static_cast<Eigen::Index>(c)) += scale;
      ids.push_back(padded("s", static_cast<std::size_t>(row) + 1, n));
      labels.emplace(ids.back(), label);
    }
  }

  Eigen::MatrixXd q = (latent * latent.transpose()) / static_cast<double>(d_latent);
  return SynthResult{SimilarityMatrix(std::move(q)), std::move(ids), std::move(labels)};
}

}  // namespace pepca
