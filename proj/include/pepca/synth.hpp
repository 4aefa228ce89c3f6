#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pepca/io.hpp"
#include "pepca/similarity.hpp"

namespace pepca {

struct SynthResult {
  SimilarityMatrix matrix;
  std::vector<std::string> ids;  // s001.. in generation order
  LabelTable labels;
};

// Gaussian mixture similarity: cluster c's center sits at
// (separation / sqrt(2)) * e_c in latent space, so centers are pairwise
// exactly `separation` apart (this needs d_latent >= n_per_cluster.size()).
// Latent points are center + noise * N(0, I); the similarity is Z Z^T / d.
// Identical seeds reproduce the output bit for bit.
SynthResult synth_mixture(const std::vector<int>& n_per_cluster, int d_latent, double separation,
                          double noise, std::uint64_t seed);

}  // namespace pepca
