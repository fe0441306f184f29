#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "nullity/generators.hpp"
#include "nullity/rational.hpp"
#include "nullity/spectrum.hpp"
#include "support.hpp"

using namespace nullity;
using namespace nullity::testing;

namespace {

std::vector<double> eigen_oracle(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1.0;
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
  return {ev.data(), ev.data() + n};
}

Graph without_vertex_edges(const Graph& g, std::uint32_t v) {
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    if (e.u != v && e.v != v) kept.push_back(e);
  }
  return Graph::from_edges(g.num_vertices(), kept);
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("small spectra") {
    const double s3 = std::sqrt(3.0);
    const SpectrumSummary star = symmetric_eigenvalues(star_graph(3));
    const std::vector<double> star_expected{-s3, 0.0, 0.0, s3};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(star.eigenvalues[i] - star_expected[i]) < 1e-10);
    CHECK(star.numerical_kernel == 2);

    const SpectrumSummary edge = symmetric_eigenvalues(path_graph(2));
    CHECK(edge.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(edge.eigenvalues[1] == doctest::Approx(1.0));

    const SpectrumSummary c4 = symmetric_eigenvalues(cycle_graph(4));
    const std::vector<double> c4_expected{-2.0, 0.0, 0.0, 2.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(c4.eigenvalues[i] - c4_expected[i]) < 1e-10);
    CHECK(c4.spectral_radius == doctest::Approx(2.0));
    CHECK(c4.cdf(0.5) == doctest::Approx(0.75));
    CHECK(c4.cdf(-0.5) == doctest::Approx(0.25));
    CHECK(c4.histogram(5, -2.5, 2.5) == std::vector<std::size_t>{1, 0, 2, 0, 1});

    CHECK(symmetric_eigenvalues(Graph(3)).eigenvalues == std::vector<double>{0.0, 0.0, 0.0});
    CHECK_THROWS_AS(symmetric_eigenvalues(Graph(20), 10), std::length_error);
  }

  TEST_CASE("agrees with an independent eigensolver") {
    Rng rng = make_stream(31);
    for (int i = 0; i < 20; ++i) {
      const Graph g = random_gnp(60, 0.05 + 0.01 * i, rng);
      const SpectrumSummary s = symmetric_eigenvalues(g);
      const std::vector<double> oracle = eigen_oracle(g);
      for (std::size_t k = 0; k < oracle.size(); ++k) REQUIRE(std::abs(s.eigenvalues[k] - oracle[k]) < 1e-9);
    }
  }

  TEST_CASE("trace and second moment") {
    for (int i = 0; i < 10; ++i) {
      const Graph g = gen_erdos_renyi(400, 3.0, i);
      const SpectrumSummary s = symmetric_eigenvalues(g);
      double sum = 0.0, sq = 0.0;
      for (double l : s.eigenvalues) {
        sum += l;
        sq += l * l;
      }
      CHECK(std::abs(sum) < 1e-8 * 400);
      CHECK(std::abs(sq - 2.0 * g.num_edges()) < 1e-6 * g.num_edges());
    }
  }

  TEST_CASE("bipartite spectra are symmetric") {
    Rng rng = make_stream(33);
    for (int i = 0; i < 20; ++i) {
      CHECK(symmetric_eigenvalues(random_tree(2 + 5 * i, rng)).symmetry_defect() < 1e-8);
      CHECK(symmetric_eigenvalues(cycle_graph(4 + 2 * i)).symmetry_defect() < 1e-8);
    }
  }

  TEST_CASE("numerical kernel on trees matches the exact one") {
    Rng rng = make_stream(34);
    for (int i = 0; i < 50; ++i) {
      const Graph t = random_tree(2 + i % 40, rng);
      CHECK(symmetric_eigenvalues(t).numerical_kernel == t.num_vertices() - rational_rank_oracle(t));
    }
  }

  TEST_CASE("max_cdf_gap") {
    const std::vector<double> a{-1.0, 0.0, 1.0}, b{-1.0, 0.5, 1.0};
    CHECK(max_cdf_gap(a, a, 1e-9) == 0.0);
    CHECK(max_cdf_gap(a, b, 1e-9) == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("rank perturbation bound") {
    const Graph g = gen_erdos_renyi(50, 3.0, 1);
    const PerturbationCheck same = cdf_rank_perturbation_check(g, g);
    CHECK(same.max_cdf_gap == 0.0);
    CHECK(same.rank_difference == 0);

    Rng rng = make_stream(35);
    std::uniform_int_distribution<std::uint32_t> pick(0, 49);
    for (int i = 0; i < 100; ++i) {
      const Graph a = gen_erdos_renyi(50, 3.0, 100 + i);
      const Graph b = without_vertex_edges(a, pick(rng));
      const PerturbationCheck pc = cdf_rank_perturbation_check(a, b);
      REQUIRE(pc.rank_difference <= 2);
      REQUIRE(pc.max_cdf_gap <= 2.0 / 50 + 1e-12);
      REQUIRE(pc.holds);
    }

    const PerturbationCheck empty = cdf_rank_perturbation_check(g, Graph(50));
    CHECK(empty.rank_difference == rational_rank_oracle(g));
    CHECK(empty.max_cdf_gap <= empty.bound + 1e-12);
    CHECK(empty.holds);
  }
}
