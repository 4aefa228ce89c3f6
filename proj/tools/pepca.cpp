#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pepca/deflation.hpp"
#include "pepca/errors.hpp"
#include "pepca/genotype.hpp"
#include "pepca/io.hpp"
#include "pepca/metrics.hpp"
#include "pepca/solver.hpp"
#include "pepca/svg.hpp"
#include "pepca/synth.hpp"
#include "pepca/version.hpp"

namespace {

using nlohmann::json;

bool parse_double(const std::string& token, double* out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<double> parse_lambda_grid(const std::string& csv) {
  std::vector<double> grid;
  for (const std::string& token : split(csv, ',')) {
    double value = 0.0;
    if (!parse_double(token, &value))
      throw CLI::ValidationError("--lambda", "invalid number '" + token + "'");
    grid.push_back(value);
  }
  return grid;
}

// "CxN" (C equal clusters of N points) or a comma list of per-cluster counts
std::vector<int> parse_cluster_spec(const std::string& spec) {
  auto parse_count = [](const std::string& token) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value < 1)
      throw CLI::ValidationError("--clusters", "invalid count '" + token + "'");
    return value;
  };
  const auto x = spec.find('x');
  if (x != std::string::npos) {
    const int clusters = parse_count(spec.substr(0, x));
    const int per_cluster = parse_count(spec.substr(x + 1));
    return std::vector<int>(static_cast<std::size_t>(clusters), per_cluster);
  }
  std::vector<int> counts;
  for (const std::string& token : split(spec, ',')) counts.push_back(parse_count(token));
  return counts;
}

std::string format_lambda(double lambda) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", lambda);
  return buf;
}

json make_manifest(const std::string& command, json config) {
  return json{{"command", command}, {"config", std::move(config)}, {"version", pepca::kVersion}};
}

void write_json_file(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pepca::DataError("cannot write '" + path.string() + "'");
  out << value.dump(2) << "\n";
}

// row-aligned labels for an embedding; every subject must be covered
std::vector<std::string> aligned_labels(const pepca::Embedding& e, const pepca::LabelTable& table) {
  std::vector<std::string> labels;
  labels.reserve(e.ids().size());
  for (const std::string& id : e.ids()) {
    const auto it = table.find(id);
    if (it == table.end()) throw pepca::DataError("no label for subject '" + id + "'");
    labels.push_back(it->second);
  }
  return labels;
}

struct GrmOpts {
  std::string genotypes;
  std::string out;
};

struct SolveOpts {
  std::string similarity;
  std::string lambda_csv = "0,1,10,100";
  double mu = 0.1;
  int k = 2;
  double tol = 1e-8;
  int max_iter = 500;
  std::uint64_t seed = 0;
  std::string out_prefix;
};

struct MetricsOpts {
  std::string embedding;
  std::string labels;
  std::string out;
};

struct PlotOpts {
  std::string embedding;
  std::string labels;
  std::string out;
};

struct SynthOpts {
  std::string clusters;
  double separation = 5.0;
  double noise = 1.0;
  std::uint64_t seed = 0;
  std::string out_prefix;
};

int run_grm(const GrmOpts& opt) {
  const pepca::GenotypeMatrix genotypes = pepca::read_genotypes(opt.genotypes);
  const pepca::SimilarityMatrix grm = pepca::compute_grm(genotypes);
  pepca::write_similarity(grm, genotypes.subject_ids(), opt.out);
  write_json_file(opt.out + ".manifest.json",
                  make_manifest("grm", {{"genotypes", opt.genotypes}, {"out", opt.out}}));
  std::cerr << "pepca grm: " << genotypes.n_subjects() << " subjects, "
            << genotypes.n_variants() << " variants -> " << opt.out << "\n";
  return 0;
}

int run_solve(const SolveOpts& opt) {
  const std::vector<double> grid = parse_lambda_grid(opt.lambda_csv);
  const pepca::SimilarityData data = pepca::read_similarity(opt.similarity);
  if (data.max_asymmetry > 1e-8)
    std::cerr << "pepca solve: warning: input asymmetry " << data.max_asymmetry
              << " exceeds 1e-8; symmetrized as (X + X^T) / 2\n";
  if (opt.k > data.matrix.dim())
    throw pepca::DataError("k = " + std::to_string(opt.k) + " exceeds matrix dimension " +
                           std::to_string(data.matrix.dim()));

  for (const double lambda : grid) {
    pepca::SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.mu = opt.mu;
    cfg.tol = opt.tol;
    cfg.max_iter = opt.max_iter;
    cfg.seed = opt.seed;

    const pepca::Spectrum spectrum = pepca::solve_top_k(data.matrix, opt.k, cfg);
    Eigen::MatrixXd points(data.matrix.dim(), opt.k);
    for (int level = 0; level < opt.k; ++level)
      points.col(level) = spectrum.pairs[static_cast<std::size_t>(level)].vector.coords();
    const pepca::Embedding embedding(std::move(points), data.ids);

    const std::string out = opt.out_prefix + "_lambda" + format_lambda(lambda) + ".csv";
    const json manifest = make_manifest(
        "solve", {{"similarity", opt.similarity},
                  {"lambda_grid", grid},
                  {"lambda", lambda},
                  {"mu", opt.mu},
                  {"k", opt.k},
                  {"tol", opt.tol},
                  {"max_iter", opt.max_iter},
                  {"seed", opt.seed},
                  {"out", out}});
    pepca::write_embedding(embedding, spectrum, out, &manifest);

    std::cerr << "pepca solve: lambda=" << format_lambda(lambda);
    for (const auto& pair : spectrum.pairs)
      std::cerr << (pair.converged ? " converged" : " NOT-converged") << "("
                << pair.iterations << ")";
    std::cerr << " -> " << out << "\n";
  }
  return 0;
}

int run_metrics(const MetricsOpts& opt) {
  const pepca::Embedding embedding = pepca::read_embedding(opt.embedding);
  const pepca::LabelTable table = pepca::read_labels(opt.labels);
  const pepca::ClusterAssignment assignment(aligned_labels(embedding, table));
  if (assignment.cluster_count() < 2)
    throw pepca::DataError("labels define a single cluster; silhouette needs at least two");

  const json report{
      {"n", embedding.count()},
      {"k", assignment.cluster_count()},
      {"ss_within", pepca::ss_within(embedding, assignment)},
      {"ss_between", pepca::ss_between(embedding, assignment)},
      {"silhouette_mean", pepca::silhouette_mean(embedding, assignment)},
  };
  write_json_file(opt.out, report);
  write_json_file(opt.out + ".manifest.json",
                  make_manifest("metrics", {{"embedding", opt.embedding},
                                            {"labels", opt.labels},
                                            {"out", opt.out}}));
  std::cerr << "pepca metrics: n=" << embedding.count() << " k=" << assignment.cluster_count()
            << " -> " << opt.out << "\n";
  return 0;
}

int run_plot(const PlotOpts& opt) {
  const pepca::Embedding embedding = pepca::read_embedding(opt.embedding);
  const pepca::LabelTable table = pepca::read_labels(opt.labels);
  aligned_labels(embedding, table);  // label coverage check with a data error
  const json manifest = make_manifest(
      "plot", {{"embedding", opt.embedding}, {"labels", opt.labels}, {"out", opt.out}});
  pepca::plot_svg(embedding, table, opt.out, manifest.dump());
  std::cerr << "pepca plot: " << embedding.count() << " points -> " << opt.out << "\n";
  return 0;
}

int run_synth(const SynthOpts& opt) {
  const std::vector<int> counts = parse_cluster_spec(opt.clusters);
  const int d_latent = static_cast<int>(counts.size());
  const pepca::SynthResult result =
      pepca::synth_mixture(counts, d_latent, opt.separation, opt.noise, opt.seed);

  const std::string similarity_path = opt.out_prefix + "_similarity.csv";
  const std::string labels_path = opt.out_prefix + "_labels.csv";
  pepca::write_similarity(result.matrix, result.ids, similarity_path);
  pepca::write_labels(result.ids, result.labels, labels_path);
  write_json_file(opt.out_prefix + ".manifest.json",
                  make_manifest("synth", {{"clusters", counts},
                                          {"d_latent", d_latent},
                                          {"separation", opt.separation},
                                          {"noise", opt.noise},
                                          {"seed", opt.seed},
                                          {"similarity", similarity_path},
                                          {"labels", labels_path}}));
  std::cerr << "pepca synth: " << result.ids.size() << " subjects in " << counts.size()
            << " clusters -> " << similarity_path << ", " << labels_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penalized leading eigenvectors: GRM construction, sphere-constrained solves,\n"
               "stratification metrics, and deterministic scatter plots"};
  app.require_subcommand(1);

  GrmOpts grm_opts;
  CLI::App* grm = app.add_subcommand("grm", "genetic relationship matrix from a dosage file");
  grm->add_option("--genotypes", grm_opts.genotypes, "dosage CSV/TSV (subjects x variants)")
      ->required();
  grm->add_option("--out", grm_opts.out, "output similarity CSV")->required();

  SolveOpts solve_opts;
  CLI::App* solve = app.add_subcommand("solve", "penalized eigenvectors over a lambda grid");
  solve->add_option("--similarity", solve_opts.similarity, "similarity CSV (labeled or bare)")
      ->required();
  solve->add_option("--lambda", solve_opts.lambda_csv,
                    "comma-separated penalty grid (default 0,1,10,100)");
  solve->add_option("--mu", solve_opts.mu, "smoothing strength, 0 = unsmoothed (default 0.1)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--k", solve_opts.k, "number of components (default 2)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--tol", solve_opts.tol, "convergence tolerance (default 1e-8)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", solve_opts.max_iter, "iteration cap per level (default 500)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_opts.seed, "seed for randomized restarts (default 0)");
  solve->add_option("--out-prefix", solve_opts.out_prefix, "prefix for per-lambda outputs")
      ->required();

  MetricsOpts metrics_opts;
  CLI::App* metrics = app.add_subcommand("metrics", "stratification quality of an embedding");
  metrics->add_option("--embedding", metrics_opts.embedding, "embedding CSV")->required();
  metrics->add_option("--labels", metrics_opts.labels, "label CSV (subject_id,label)")->required();
  metrics->add_option("--out", metrics_opts.out, "output JSON")->required();

  PlotOpts plot_opts;
  CLI::App* plot = app.add_subcommand("plot", "SVG scatter of the first two components");
  plot->add_option("--embedding", plot_opts.embedding, "embedding CSV")->required();
  plot->add_option("--labels", plot_opts.labels, "label CSV (subject_id,label)")->required();
  plot->add_option("--out", plot_opts.out, "output SVG")->required();

  SynthOpts synth_opts;
  CLI::App* synth = app.add_subcommand("synth", "synthetic mixture similarity + labels");
  synth->add_option("--clusters", synth_opts.clusters, "spec: CxN or comma-separated counts")
      ->required();
  synth->add_option("--separation", synth_opts.separation,
                    "pairwise center distance (default 5)")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--noise", synth_opts.noise, "latent noise sigma (default 1)")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_opts.seed, "generator seed (default 0)");
  synth->add_option("--out-prefix", synth_opts.out_prefix, "prefix for output files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help exits clean, every other parse problem is a usage error
  }

  const auto started = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (grm->parsed()) rc = run_grm(grm_opts);
    else if (solve->parsed()) rc = run_solve(solve_opts);
    else if (metrics->parsed()) rc = run_metrics(metrics_opts);
    else if (plot->parsed()) rc = run_plot(plot_opts);
    else if (synth->parsed()) rc = run_synth(synth_opts);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pepca: " << e.what() << "\n";
    rc = 1;
  } catch (const pepca::NumericalError& e) {
    std::cerr << "pepca: numerical failure: " << e.what() << " (after " << e.iterations()
              << " iterations)\n";
    rc = 3;
  } catch (const std::exception& e) {
    std::cerr << "pepca: " << e.what() << "\n";
    rc = 2;
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::cerr << "pepca: finished in " << elapsed.count() << " ms\n";
  return rc;
}
