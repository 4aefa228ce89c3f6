#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "pepca/deflation.hpp"

using pepca::SimilarityMatrix;
using pepca::SolverConfig;
using pepca::UnitVector;

namespace {

SimilarityMatrix diag31() {
  Eigen::Matrix2d q;
  q << 3.0, 0.0, 0.0, 1.0;
  return SimilarityMatrix(q);
}

}  // namespace

TEST_CASE("rayleigh") {
  const SimilarityMatrix x = diag31();
  CHECK(pepca::rayleigh(x, UnitVector(Eigen::Vector2d(1.0, 0.0))) == 3.0);
  CHECK(pepca::rayleigh(x, UnitVector(Eigen::Vector2d(1.0, 1.0))) ==
        doctest::Approx(2.0).epsilon(1e-14));

  const SimilarityMatrix identity(Eigen::MatrixXd::Identity(5, 5));
  pepca::Rng rng(3);
  for (int trial = 0; trial < 5; ++trial)
    CHECK(pepca::rayleigh(identity, UnitVector(rng.unit_vector(5))) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(pepca::rayleigh(x, UnitVector(Eigen::Vector3d(1.0, 0.0, 0.0))),
                  std::invalid_argument);
}

TEST_CASE("deflate") {
  const SimilarityMatrix x = diag31();
  const SimilarityMatrix d = pepca::deflate(x, UnitVector(Eigen::Vector2d(1.0, 0.0)), 3.0);
  CHECK(d.matrix()(0, 0) == 0.0);
  CHECK(d.matrix()(1, 1) == 1.0);
  CHECK(d.matrix()(0, 1) == 0.0);

  const SimilarityMatrix identity2(Eigen::MatrixXd::Identity(2, 2));
  const SimilarityMatrix d2 = pepca::deflate(identity2, UnitVector(Eigen::Vector2d(0.0, 1.0)), 1.0);
  CHECK(d2.matrix()(0, 0) == 1.0);
  CHECK(d2.matrix()(1, 1) == 0.0);

  SUBCASE("removing the exact top eigenpair exposes the second eigenvalue") {
    const Eigen::MatrixXd m = oracle::random_symmetric(10, 31);
    const auto top2 = oracle::dense_top_k(m, 2);
    const SimilarityMatrix q(m);
    const SimilarityMatrix deflated =
        pepca::deflate(q, UnitVector(top2[0].vector), top2[0].value);
    const oracle::EigenPair next = oracle::dense_leading(deflated.matrix());
    CHECK(std::abs(next.value - top2[1].value) <= 1e-8 * std::max(1.0, std::abs(top2[1].value)));
  }

  SUBCASE("deflation identity holds exactly") {
    const Eigen::MatrixXd m = oracle::random_symmetric(8, 77);
    const SimilarityMatrix q(m);
    pepca::Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
      const UnitVector v(rng.unit_vector(8));
      const double alpha = pepca::rayleigh(q, v);
      const Eigen::MatrixXd outer = v.coords() * v.coords().transpose();
      const Eigen::MatrixXd direct = q.matrix() - alpha * outer;
      const SimilarityMatrix deflated = pepca::deflate(q, v, alpha);
      CHECK((deflated.matrix() - direct).template lpNorm<Eigen::Infinity>() == 0.0);
    }
  }

  SUBCASE("trace accounting") {
    const Eigen::MatrixXd m = oracle::random_symmetric(12, 13);
    const SimilarityMatrix q(m);
    pepca::Rng rng(14);
    for (const double alpha : {-2.5, 0.0, 1.0, 40.0}) {
      const SimilarityMatrix deflated = pepca::deflate(q, UnitVector(rng.unit_vector(12)), alpha);
      const double expected = m.trace() - alpha;
      CHECK(std::abs(deflated.matrix().trace() - expected) <=
            1e-10 * std::max(1.0, std::abs(expected)));
    }
  }

  CHECK_THROWS_AS(pepca::deflate(x, UnitVector(Eigen::Vector3d(0.0, 0.0, 1.0)), 1.0),
                  std::invalid_argument);
}

TEST_CASE("solve_top_k") {
  SUBCASE("diag(3,1) splits into its eigenpairs") {
    SolverConfig cfg;
    const pepca::Spectrum spectrum = pepca::solve_top_k(diag31(), 2, cfg);
    REQUIRE(spectrum.pairs.size() == 2);
    CHECK(spectrum.deflated_from == 2);
    CHECK(spectrum.pairs[0].vector[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(spectrum.pairs[0].rayleigh == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(spectrum.pairs[1].vector[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(spectrum.pairs[1].rayleigh == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("k = 1 equals a single leading solve") {
    const Eigen::MatrixXd m = oracle::random_symmetric(9, 21);
    const SimilarityMatrix q(m);
    SolverConfig cfg;
    cfg.lambda = 0.7;
    cfg.mu = 0.1;
    const pepca::Spectrum spectrum = pepca::solve_top_k(q, 1, cfg);
    const pepca::PenalizedEigenpair single = pepca::solve_leading(q, cfg);
    REQUIRE(spectrum.pairs.size() == 1);
    CHECK(spectrum.pairs[0].objective == single.objective);
    CHECK(spectrum.pairs[0].rayleigh == single.rayleigh);
    for (int i = 0; i < 9; ++i) CHECK(spectrum.pairs[0].vector[i] == single.vector[i]);
  }

  SUBCASE("matches dense top-3 on a seeded 30x30 matrix") {
    const Eigen::MatrixXd m = oracle::random_symmetric(30, 8);
    const auto dense = oracle::dense_top_k(m, 3);
    SolverConfig cfg;
    cfg.mu = 0.1;
    const pepca::Spectrum spectrum = pepca::solve_top_k(SimilarityMatrix(m), 3, cfg);
    REQUIRE(spectrum.pairs.size() == 3);
    for (int level = 0; level < 3; ++level) {
      const auto& pair = spectrum.pairs[static_cast<std::size_t>(level)];
      CHECK(std::abs(pair.vector.coords().dot(dense[static_cast<std::size_t>(level)].vector)) >=
            1.0 - 1e-5);
      CHECK(oracle::close_rel(pair.rayleigh, dense[static_cast<std::size_t>(level)].value, 1e-5));
    }
  }

  SUBCASE("lambda = 0 extraction is orthogonal and rayleigh-sorted when gaps are wide") {
    Eigen::VectorXd spectrum_values(6);
    spectrum_values << 9.0, 7.5, 6.0, 4.0, 2.0, 0.5;  // gaps >= 0.5
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const Eigen::MatrixXd m = oracle::random_symmetric_with_spectrum(spectrum_values, seed);
      SolverConfig cfg;
      cfg.mu = 0.1;
      const pepca::Spectrum out = pepca::solve_top_k(SimilarityMatrix(m), 4, cfg);
      for (std::size_t i = 0; i < out.pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < out.pairs.size(); ++j) {
          const double inner =
              out.pairs[i].vector.coords().dot(out.pairs[j].vector.coords());
          CHECK(std::abs(inner) <= 1e-5);
        }
        if (i > 0) CHECK(out.pairs[i].rayleigh <= out.pairs[i - 1].rayleigh + 1e-9);
      }
    }
  }

  SUBCASE("k bounds are enforced") {
    const SimilarityMatrix q = diag31();
    CHECK_THROWS_AS(pepca::solve_top_k(q, 0, SolverConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(pepca::solve_top_k(q, 3, SolverConfig{}), std::invalid_argument);
    CHECK_NOTHROW(pepca::solve_top_k(q, 2, SolverConfig{}));
  }

  SUBCASE("k = n is allowed, trailing rayleigh near zero for low-rank input") {
    Eigen::MatrixXd rank1 = Eigen::MatrixXd::Zero(4, 4);
    Eigen::VectorXd u(4);
    u << 1.0, 2.0, -1.0, 0.5;
    rank1 = 5.0 * (u.normalized() * u.normalized().transpose());
    const pepca::Spectrum out = pepca::solve_top_k(SimilarityMatrix(rank1), 4, SolverConfig{});
    CHECK(out.pairs[0].rayleigh == doctest::Approx(5.0).epsilon(1e-8));
    for (std::size_t level = 1; level < 4; ++level)
      CHECK(std::abs(out.pairs[level].rayleigh) <= 1e-7);
  }
}
