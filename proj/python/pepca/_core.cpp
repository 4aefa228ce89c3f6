#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "pepca/deflation.hpp"
#include "pepca/errors.hpp"
#include "pepca/genotype.hpp"
#include "pepca/metrics.hpp"
#include "pepca/smoothing.hpp"
#include "pepca/solver.hpp"
#include "pepca/synth.hpp"
#include "pepca/version.hpp"

namespace py = pybind11;

namespace {

pepca::SolverConfig make_config(double lambda, double mu, double tol, int max_iter, int restarts,
                                std::uint64_t seed) {
  pepca::SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

// width-padded ids keep lexicographic order equal to row order, so the
// row-order arithmetic matches what a caller sees in the arrays
std::vector<std::string> padded_ids(Eigen::Index n) {
  const std::string max = std::to_string(n);
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 1; i <= n; ++i) {
    std::string digits = std::to_string(i);
    ids.push_back("s" + std::string(max.size() - digits.size(), '0') + digits);
  }
  return ids;
}

pepca::Embedding make_embedding(const Eigen::MatrixXd& points) {
  return pepca::Embedding(points, padded_ids(points.rows()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sparse penalized PCA: entropy-smoothed L1 eigenvector solver";
  m.attr("__version__") = pepca::kVersion;

  py::register_exception<pepca::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<pepca::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "smooth_abs",
      [](double z, double mu) { return pepca::smooth_abs(z, pepca::SmoothingParams(mu)); },
      py::arg("z"), py::arg("mu"),
      "Entropy-smoothed |z|: equal to |z| at mu = 0, within mu*ln(2) below it otherwise.");
  m.def(
      "smooth_abs_grad",
      [](double z, double mu) { return pepca::smooth_abs_grad(z, pepca::SmoothingParams(mu)); },
      py::arg("z"), py::arg("mu"), "Derivative tanh(z/mu) of the smoothed absolute value.");
  m.def(
      "smooth_l1",
      [](const Eigen::VectorXd& v, double mu) {
        return pepca::smooth_l1(v, pepca::SmoothingParams(mu));
      },
      py::arg("v"), py::arg("mu"), "Sum of smooth_abs over the vector entries.");

  py::class_<pepca::PenalizedEigenpair>(m, "PenalizedEigenpair")
      .def_property_readonly("vector",
                             [](const pepca::PenalizedEigenpair& p) { return p.vector.coords(); })
      .def_readonly("rayleigh", &pepca::PenalizedEigenpair::rayleigh)
      .def_readonly("objective", &pepca::PenalizedEigenpair::objective)
      .def_readonly("lambda_", &pepca::PenalizedEigenpair::lambda)
      .def_readonly("mu", &pepca::PenalizedEigenpair::mu)
      .def_readonly("converged", &pepca::PenalizedEigenpair::converged)
      .def_readonly("iterations", &pepca::PenalizedEigenpair::iterations)
      .def("__repr__", [](const pepca::PenalizedEigenpair& p) {
        return "<PenalizedEigenpair rayleigh=" + std::to_string(p.rayleigh) +
               " objective=" + std::to_string(p.objective) +
               " converged=" + (p.converged ? std::string("True") : std::string("False")) + ">";
      });

  m.def(
      "objective",
      [](const Eigen::MatrixXd& q, const Eigen::VectorXd& v, double lambda, double mu) {
        const pepca::SimilarityMatrix sim(q);
        return mu > 0.0 ? pepca::objective_smoothed(sim, v, lambda, mu)
                        : pepca::objective_unsmoothed(sim, v, lambda);
      },
      py::arg("q"), py::arg("v"), py::arg("lambda_"), py::arg("mu") = 0.0,
      "Penalized objective v'Qv - lambda * penalty(v); mu > 0 uses the smoothed penalty.");
  m.def(
      "gradient",
      [](const Eigen::MatrixXd& q, const Eigen::VectorXd& v, double lambda, double mu) {
        const pepca::SimilarityMatrix sim(q);
        return mu > 0.0 ? pepca::gradient_smoothed(sim, v, lambda, mu)
                        : pepca::subgradient_unsmoothed(sim, v, lambda);
      },
      py::arg("q"), py::arg("v"), py::arg("lambda_"), py::arg("mu") = 0.0,
      "Gradient of the smoothed objective, or the sign subgradient at mu = 0.");

  m.def(
      "solve_leading",
      [](const Eigen::MatrixXd& q, double lambda, double mu, double tol, int max_iter,
         int restarts, std::uint64_t seed) {
        return pepca::solve_leading(pepca::SimilarityMatrix(q),
                                    make_config(lambda, mu, tol, max_iter, restarts, seed));
      },
      py::arg("q"), py::arg("lambda_") = 0.0, py::arg("mu") = 0.1, py::arg("tol") = 1e-8,
      py::arg("max_iter") = 500, py::arg("restarts") = 0, py::arg("seed") = 0,
      "Leading penalized eigenpair of the symmetric matrix q.");

  m.def(
      "solve_top_k",
      [](const Eigen::MatrixXd& q, int k, double lambda, double mu, double tol, int max_iter,
         int restarts, std::uint64_t seed) {
        return pepca::solve_top_k(pepca::SimilarityMatrix(q), k,
                                  make_config(lambda, mu, tol, max_iter, restarts, seed))
            .pairs;
      },
      py::arg("q"), py::arg("k"), py::arg("lambda_") = 0.0, py::arg("mu") = 0.1,
      py::arg("tol") = 1e-8, py::arg("max_iter") = 500, py::arg("restarts") = 0,
      py::arg("seed") = 0,
      "Top-k penalized eigenpairs extracted by Rayleigh rank-1 deflation.");

  m.def(
      "rayleigh",
      [](const Eigen::MatrixXd& q, const Eigen::VectorXd& v) {
        return pepca::rayleigh(pepca::SimilarityMatrix(q), pepca::UnitVector(v));
      },
      py::arg("q"), py::arg("v"), "Rayleigh quotient v'Qv of the normalized v.");

  m.def(
      "deflate",
      [](const Eigen::MatrixXd& q, const Eigen::VectorXd& v, double alpha) {
        return pepca::deflate(pepca::SimilarityMatrix(q), pepca::UnitVector(v), alpha).matrix();
      },
      py::arg("q"), py::arg("v"), py::arg("alpha"),
      "Rank-1 subtraction q - alpha * v v' (v normalized first).");

  m.def(
      "compute_grm",
      [](const Eigen::MatrixXd& dosages) {
        return pepca::compute_grm(
                   pepca::GenotypeMatrix(dosages, padded_ids(dosages.rows())))
            .matrix();
      },
      py::arg("dosages"),
      "Genetic relationship matrix from an n x m dosage matrix (entries 0/1/2, NaN missing).");

  m.def(
      "ss_within",
      [](const Eigen::MatrixXd& points, const std::vector<std::string>& labels) {
        return pepca::ss_within(make_embedding(points), pepca::ClusterAssignment(labels));
      },
      py::arg("points"), py::arg("labels"));
  m.def(
      "ss_between",
      [](const Eigen::MatrixXd& points, const std::vector<std::string>& labels) {
        return pepca::ss_between(make_embedding(points), pepca::ClusterAssignment(labels));
      },
      py::arg("points"), py::arg("labels"));
  m.def(
      "silhouette_mean",
      [](const Eigen::MatrixXd& points, const std::vector<std::string>& labels) {
        return pepca::silhouette_mean(make_embedding(points), pepca::ClusterAssignment(labels));
      },
      py::arg("points"), py::arg("labels"));

  m.def(
      "synth_mixture",
      [](const std::vector<int>& n_per_cluster, int d_latent, double separation, double noise,
         std::uint64_t seed) {
        const pepca::SynthResult r =
            pepca::synth_mixture(n_per_cluster, d_latent, separation, noise, seed);
        std::vector<std::string> labels;
        labels.reserve(r.ids.size());
        for (const std::string& id : r.ids) labels.push_back(r.labels.at(id));
        return py::make_tuple(r.matrix.matrix(), r.ids, labels);
      },
      py::arg("n_per_cluster"), py::arg("d_latent"), py::arg("separation") = 5.0,
      py::arg("noise") = 1.0, py::arg("seed") = 0,
      "Synthetic mixture similarity: returns (q, ids, labels), deterministic per seed.");
}
