#include "pepca/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "pepca/errors.hpp"

namespace pepca {

namespace detail {

std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw DataError("'" + path.string() + "' is empty");
  return lines;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) fields.push_back(token);
  return fields;
}

bool parses_as_number(const std::string& token, double* out = nullptr) {
  if (token.empty()) return false;
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return false;
  if (out) *out = value;
  return true;
}

double parse_number(const std::string& token, const std::string& context) {
  double value = 0.0;
  if (!parses_as_number(token, &value))
    throw DataError(context + ": invalid number '" + token + "'");
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw DataError("failed while writing '" + path.string() + "'");
}

}  // namespace

GenotypeMatrix read_genotypes(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const char delim = lines[0].find('\t') != std::string::npos ? '\t' : ',';

  const auto header = split(lines[0], delim);
  if (header.size() < 2)
    throw DataError("'" + path.string() + "' line 1: expected a subject id column and at least one variant column");
  std::vector<std::string> variant_ids(header.begin() + 1, header.end());
  const auto m = variant_ids.size();

  if (lines.size() < 2) throw DataError("'" + path.string() + "' has no subject rows");
  const auto n = lines.size() - 1;
  Eigen::MatrixXd dosages(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  std::vector<std::string> subject_ids;
  subject_ids.reserve(n);

  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t line_no = row + 2;
    const auto fields = split(lines[row + 1], delim);
    if (fields.size() != m + 1)
      throw DataError("'" + path.string() + "' line " + std::to_string(line_no) + ": expected " +
                      std::to_string(m + 1) + " fields, got " + std::to_string(fields.size()));
    subject_ids.push_back(fields[0]);
    for (std::size_t col = 0; col < m; ++col) {
      const std::string& token = fields[col + 1];
      if (token.empty() || token == "NA") {
        dosages(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            std::nan("");
        continue;
      }
      double value = 0.0;
      if (!parses_as_number(token, &value) || (value != 0.0 && value != 1.0 && value != 2.0))
        throw DataError("'" + path.string() + "' line " + std::to_string(line_no) + ", column " +
                        std::to_string(col + 2) + " (variant '" + variant_ids[col] +
                        "'): invalid dosage '" + token + "' (expected 0, 1, 2, NA, or empty)");
      dosages(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
    }
  }

  try {
    return GenotypeMatrix(std::move(dosages), std::move(subject_ids), std::move(variant_ids));
  } catch (const std::invalid_argument& err) {
    throw DataError("'" + path.string() + "': " + err.what());
  }
}

void write_genotypes(const GenotypeMatrix& g, const std::filesystem::path& path) {
  std::string out = "subject_id";
  for (const auto& vid : g.variant_ids()) out += "," + vid;
  out += '\n';
  for (Eigen::Index i = 0; i < g.n_subjects(); ++i) {
    out += g.subject_ids()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < g.n_variants(); ++j) {
      const double x = g.dosages()(i, j);
      out += ',';
      out += std::isnan(x) ? "NA" : detail::format_full(x);
    }
    out += '\n';
  }
  write_file(path, out);
}

SimilarityData read_similarity(const std::filesystem::path& path) {
  const auto lines = read_lines(path);

  const bool labeled = [&] {
    const char probe_delim = lines[0].find(',') != std::string::npos ? ',' : ' ';
    const auto first = probe_delim == ',' ? split(lines[0], ',') : split_whitespace(lines[0]);
    return first.empty() || !parses_as_number(first[0]);
  }();

  std::vector<std::string> ids;
  Eigen::MatrixXd entries;

  if (labeled) {
    const auto header = split(lines[0], ',');
    if (header.size() < 2)
      throw DataError("'" + path.string() + "': labeled similarity needs at least one id column");
    ids.assign(header.begin() + 1, header.end());
    const auto n = ids.size();
    if (lines.size() - 1 != n)
      throw DataError("'" + path.string() + "' is not square: " + std::to_string(lines.size() - 1) +
                      " rows for " + std::to_string(n) + " columns");
    entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t row = 0; row < n; ++row) {
      const auto fields = split(lines[row + 1], ',');
      if (fields.size() != n + 1)
        throw DataError("'" + path.string() + "' line " + std::to_string(row + 2) + ": expected " +
                        std::to_string(n + 1) + " fields, got " + std::to_string(fields.size()));
      if (fields[0] != ids[row])
        throw DataError("'" + path.string() + "' line " + std::to_string(row + 2) + ": row id '" +
                        fields[0] + "' does not match column id '" + ids[row] + "'");
      for (std::size_t col = 0; col < n; ++col)
        entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            parse_number(fields[col + 1], "'" + path.string() + "' line " + std::to_string(row + 2));
    }
  } else {
    const bool comma = lines[0].find(',') != std::string::npos;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t row = 0; row < lines.size(); ++row)
      rows.push_back(comma ? split(lines[row], ',') : split_whitespace(lines[row]));
    const auto n = rows[0].size();
    if (rows.size() != n)
      throw DataError("'" + path.string() + "' is not square: " + std::to_string(rows.size()) +
                      " rows for " + std::to_string(n) + " columns");
    entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t row = 0; row < n; ++row) {
      if (rows[row].size() != n)
        throw DataError("'" + path.string() + "' line " + std::to_string(row + 1) + ": expected " +
                        std::to_string(n) + " fields, got " + std::to_string(rows[row].size()));
      for (std::size_t col = 0; col < n; ++col)
        entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            parse_number(rows[row][col], "'" + path.string() + "' line " + std::to_string(row + 1));
    }
    for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i + 1));
  }

  if (!entries.allFinite())
    throw DataError("'" + path.string() + "': similarity entries must be finite");
  const double max_asymmetry = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  return SimilarityData{SimilarityMatrix(std::move(entries)), std::move(ids), max_asymmetry};
}

void write_similarity(const SimilarityMatrix& m, const std::vector<std::string>& ids,
                      const std::filesystem::path& path) {
  if (static_cast<Eigen::Index>(ids.size()) != m.dim())
    throw std::invalid_argument("id count does not match similarity dimension");
  std::string out = "id";
  for (const auto& id : ids) out += "," + id;
  out += '\n';
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    out += ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      out += ',';
      out += detail::format_full(m.matrix()(i, j));
    }
    out += '\n';
  }
  write_file(path, out);
}

Embedding read_embedding(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const auto header = split(lines[0], ',');
  if (header.size() < 2 || header[0] != "subject_id")
    throw DataError("'" + path.string() + "': expected header subject_id,pc1,...");
  const auto d = header.size() - 1;
  if (lines.size() < 2) throw DataError("'" + path.string() + "' has no points");
  const auto n = lines.size() - 1;

  Eigen::MatrixXd points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t row = 0; row < n; ++row) {
    const auto fields = split(lines[row + 1], ',');
    if (fields.size() != d + 1)
      throw DataError("'" + path.string() + "' line " + std::to_string(row + 2) + ": expected " +
                      std::to_string(d + 1) + " fields, got " + std::to_string(fields.size()));
    ids.push_back(fields[0]);
    for (std::size_t col = 0; col < d; ++col)
      points(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          parse_number(fields[col + 1], "'" + path.string() + "' line " + std::to_string(row + 2));
  }
  try {
    return Embedding(std::move(points), std::move(ids));
  } catch (const std::invalid_argument& err) {
    throw DataError("'" + path.string() + "': " + err.what());
  }
}

void write_embedding(const Embedding& e, const Spectrum& spectrum,
                     const std::filesystem::path& path, const nlohmann::json* manifest) {
  std::string out = "subject_id";
  for (Eigen::Index c = 0; c < e.dim(); ++c) out += ",pc" + std::to_string(c + 1);
  out += '\n';
  for (Eigen::Index i = 0; i < e.count(); ++i) {
    out += e.ids()[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < e.dim(); ++c) {
      out += ',';
      out += detail::format_full(e.points()(i, c));
    }
    out += '\n';
  }
  write_file(path, out);

  nlohmann::json meta{
      {"lambda", spectrum.config.lambda}, {"mu", spectrum.config.mu},
      {"tol", spectrum.config.tol},       {"max_iter", spectrum.config.max_iter},
      {"seed", spectrum.config.seed},
  };
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& pair : spectrum.pairs)
    levels.push_back({{"rayleigh", pair.rayleigh},
                      {"objective", pair.objective},
                      {"converged", pair.converged},
                      {"iterations", pair.iterations}});
  meta["levels"] = std::move(levels);
  if (manifest) meta["manifest"] = *manifest;

  std::filesystem::path sidecar = path;
  sidecar += ".meta.json";
  write_file(sidecar, meta.dump(2) + "\n");
}

LabelTable read_labels(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.size() < 2) throw DataError("'" + path.string() + "' has no label rows");
  LabelTable table;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = split(lines[row], ',');
    if (fields.size() != 2)
      throw DataError("'" + path.string() + "' line " + std::to_string(row + 1) +
                      ": expected subject_id,label");
    if (!table.emplace(fields[0], fields[1]).second)
      throw DataError("'" + path.string() + "' line " + std::to_string(row + 1) +
                      ": duplicate subject id '" + fields[0] + "'");
  }
  return table;
}

void write_labels(const std::vector<std::string>& ids, const LabelTable& labels,
                  const std::filesystem::path& path) {
  std::string out = "subject_id,label\n";
  for (const auto& id : ids) {
    const auto it = labels.find(id);
    if (it == labels.end()) throw std::invalid_argument("no label for subject '" + id + "'");
    out += id + "," + it->second + "\n";
  }
  write_file(path, out);
}

}  // namespace pepca
