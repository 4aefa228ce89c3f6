#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pepca/deflation.hpp"
#include "pepca/genotype.hpp"
#include "pepca/metrics.hpp"
#include "pepca/similarity.hpp"

namespace pepca {

using LabelTable = std::map<std::string, std::string>;

struct SimilarityData {
  SimilarityMatrix matrix;
  std::vector<std::string> ids;
  double max_asymmetry = 0.0;  // largest |X - X^T| entry seen before symmetrization
};

// Delimiter-separated dosage file: header row (subject id column name, then
// variant ids), one row per subject. Delimiter is auto-detected from the
// header (tab if present, else comma). NA or an empty field is missing.
GenotypeMatrix read_genotypes(const std::filesystem::path& path);
void write_genotypes(const GenotypeMatrix& g, const std::filesystem::path& path);

// Labeled CSV (header of ids, id-leading rows) or bare numeric square matrix
// (comma- or whitespace-separated). Bare matrices get ids s1..sn.
SimilarityData read_similarity(const std::filesystem::path& path);
void write_similarity(const SimilarityMatrix& m, const std::vector<std::string>& ids,
                      const std::filesystem::path& path);

// Embedding CSV: header subject_id,pc1..pck, coordinates at full precision
// (17 significant digits). write_embedding also writes <path>.meta.json with
// solver configuration and per-level rayleigh/objective/converged/iterations,
// plus an optional run manifest.
Embedding read_embedding(const std::filesystem::path& path);
void write_embedding(const Embedding& e, const Spectrum& spectrum,
                     const std::filesystem::path& path,
                     const nlohmann::json* manifest = nullptr);

// Label CSV: header, then subject_id,label rows.
LabelTable read_labels(const std::filesystem::path& path);
void write_labels(const std::vector<std::string>& ids, const LabelTable& labels,
                  const std::filesystem::path& path);

namespace detail {
// full-precision round-trip formatting used by every writer
std::string format_full(double x);
}  // namespace detail

}  // namespace pepca
