#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "nullity/graph.hpp"
#include "nullity/tree.hpp"
#include "support.hpp"

using namespace nullity;
using namespace nullity::testing;

namespace {

// Root kernel projection from an independent dense eigensolver.
double eigen_root_projection(const Graph& g, std::uint32_t root) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  double p = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(solver.eigenvalues()(k)) < 1e-8) p += solver.eigenvectors()(root, k) * solver.eigenvectors()(root, k);
  }
  return p;
}

}  // namespace

TEST_SUITE("tree_spectral") {
  TEST_CASE("sample_gwt examples") {
    Rng rng = make_stream(1);
    const TreeSample lone = sample_gwt(parse_model("pmf:0:1"), 6, rng);
    CHECK(lone.size() == 1);
    const TreeSample reg = sample_gwt(regular_model(3), 2, rng);
    CHECK(reg.size() == 10);
    CHECK(reg.valid);
    const TreeSample capped = sample_gwt(regular_model(3), 12, rng, 100);
    CHECK_FALSE(capped.valid);
  }

  TEST_CASE("generation sizes of poisson:c=2 trees") {
    const DegreeModel m = poisson_model(2.0);
    const std::size_t depth = 8, samples = 10'000;
    std::vector<double> sum(depth + 1, 0.0), sumsq(depth + 1, 0.0);
    Rng rng = make_stream(2);
    for (std::size_t s = 0; s < samples; ++s) {
      const TreeSample t = sample_gwt(m, depth, rng);
      std::vector<double> gen(depth + 1, 0.0);
      for (auto d : t.depth) gen[d] += 1;
      for (std::size_t d = 0; d <= depth; ++d) {
        sum[d] += gen[d];
        sumsq[d] += gen[d] * gen[d];
      }
    }
    for (std::size_t d = 1; d <= depth; ++d) {
      const double mean = sum[d] / samples;
      const double sigma = std::sqrt((sumsq[d] / samples - mean * mean) / samples);
      CAPTURE(d);
      CHECK(std::abs(mean - std::pow(2.0, static_cast<double>(d))) < 3 * sigma);
    }
  }

  TEST_CASE("h_recursion examples") {
    const TreeSample lone = tree_from_graph(Graph(1), 0);
    CHECK(h_recursion(lone, 0.3) == 1.0);
    const TreeSample edge = tree_from_graph(path_graph(2), 0);
    for (double t : {1.0, 0.1, 0.01}) CHECK(h_recursion(edge, t) == doctest::Approx(t * t / (1 + t * t)));
    const Graph star = star_graph(3);
    CHECK(h_recursion(tree_from_graph(star, 0), 1e-7) < 1e-6);
    CHECK(h_recursion(tree_from_graph(star, 1), 1e-7) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK_THROWS_AS(h_recursion(edge, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(h_recursion(edge, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(tree_from_graph(cycle_graph(4), 0), std::invalid_argument);
  }

  TEST_CASE("exact_atom_finite_tree examples") {
    CHECK(exact_atom_finite_tree(tree_from_graph(Graph(1), 0)) == 1.0);
    CHECK(exact_atom_finite_tree(tree_from_graph(path_graph(3), 0)) == doctest::Approx(0.5));
    CHECK(exact_atom_finite_tree(tree_from_graph(star_graph(3), 0)) == 0.0);
    CHECK(exact_atom_finite_tree(tree_from_graph(star_graph(3), 1)) == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("exact atom equals the eigenvector projection on random trees") {
    Rng rng = make_stream(3);
    std::uniform_int_distribution<std::size_t> size(2, 12);
    for (int i = 0; i < 500; ++i) {
      const Graph g = random_tree(size(rng), rng);
      const double exact = exact_atom_finite_tree(tree_from_graph(g, 0));
      CHECK(std::abs(exact - eigen_root_projection(g, 0)) < 1e-9);
    }
  }

  TEST_CASE("h lies in [0, 1] and decreases with t") {
    Rng rng = make_stream(4);
    std::uniform_int_distribution<std::size_t> size(1, 40);
    const double ts[] = {1.0, 0.3, 0.1, 0.01, 0.001};
    for (int i = 0; i < 1000; ++i) {
      const Graph g = random_tree(size(rng), rng);
      const TreeSample t = tree_from_graph(g, 0);
      double prev = 1.0;
      for (double tv : ts) {
        const double h = h_recursion(t, tv);
        REQUIRE(h >= 0.0);
        REQUIRE(h <= 1.0);
        REQUIRE(h <= prev + 1e-12);
        prev = h;
      }
      // The limit t -> 0 on a finite tree is the exact atom.
      CHECK(h_recursion(t, 1e-6) >= exact_atom_finite_tree(t) - 1e-9);
    }
  }

  TEST_CASE("deeper truncation lowers h") {
    const DegreeModel m = poisson_model(2.0);
    Rng rng = make_stream(5);
    for (int i = 0; i < 200; ++i) {
      const TreeSample t = sample_gwt(m, 12, rng);
      for (double tv : {0.1, 0.01}) {
        for (std::size_t d = 0; d + 2 <= 12; d += 2) {
          REQUIRE(h_recursion(t, tv, d + 2) <= h_recursion(t, tv, d) + 1e-12);
        }
      }
    }
  }

  TEST_CASE("ExtendedReal conventions") {
    CHECK(ExtendedReal::finite(0.0).kind() == ExtendedReal::Kind::kZero);
    CHECK(ExtendedReal::zero().reciprocal().kind() == ExtendedReal::Kind::kInfinite);
    CHECK(ExtendedReal::infinity().reciprocal().kind() == ExtendedReal::Kind::kZero);
    CHECK((ExtendedReal::finite(2.0) + ExtendedReal::infinity()).kind() == ExtendedReal::Kind::kInfinite);
    CHECK((ExtendedReal::finite(2.0) + ExtendedReal::finite(0.5)).value() == 2.5);
    CHECK_THROWS(ExtendedReal::finite(-1.0));
    CHECK_THROWS(ExtendedReal::infinity().value());
  }

  TEST_CASE("atom_at_zero_mc on regular:d=3 decays with t") {
    AtomOptions opts;
    opts.depths = {6, 8};
    opts.t_values = {1e-1, 1e-2, 1e-3};
    opts.samples = 50;
    const AtomGridEstimate est = atom_at_zero_mc(regular_model(3), opts);
    CHECK(est.monotone_in_t);
    CHECK(est.monotone_in_depth);
    for (const auto& row : est.estimate) {
      CHECK(row[0] > row[1]);
      CHECK(row[1] > row[2]);
    }
  }

  TEST_CASE("atom_at_zero_mc on a {0, 1} law is exact") {
    const double a = 0.3;
    AtomOptions opts;
    opts.depths = {2, 4};
    opts.t_values = {1e-1, 1e-3};
    opts.samples = 4000;
    const AtomGridEstimate est = atom_at_zero_mc(parse_model("pmf:0:0.3,1:0.7"), opts);
    // Each tree is a single node (h = 1) or a single edge (h = t^2/(1+t^2)),
    // so the estimate is the empirical fraction of single nodes plus that term.
    for (std::size_t j = 0; j < opts.t_values.size(); ++j) {
      const double t = opts.t_values[j];
      const double edge = t * t / (1 + t * t);
      const double frac = (est.estimate[0][j] - edge) / (1 - edge);
      CHECK(est.estimate[1][j] == doctest::Approx(est.estimate[0][j]).epsilon(1e-14));
      CHECK(std::abs(frac - a) < 4 * std::sqrt(a * (1 - a) / opts.samples));
    }
  }

  TEST_CASE("atom_at_zero_mc on poisson:c=1") {
    AtomOptions opts;
    opts.depths = {8, 16};
    opts.t_values = {1e-2, 1e-3};
    opts.samples = 20'000;
    const AtomGridEstimate est = atom_at_zero_mc(poisson_model(1.0), opts);
    const double truth = 0.455938092676404194;
    CHECK(est.headline() >= truth - 3 * est.headline_error());
    CHECK(est.headline() <= truth + 0.03);
    CHECK(est.discarded == 0);
  }

  TEST_CASE("atom_at_zero_mc does not depend on the worker count") {
    AtomOptions opts;
    opts.depths = {4, 6};
    opts.t_values = {1e-1, 1e-2};
    opts.samples = 300;
    const AtomGridEstimate a = atom_at_zero_mc(poisson_model(2.0), opts);
    opts.workers = 3;
    const AtomGridEstimate b = atom_at_zero_mc(poisson_model(2.0), opts);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
  }

  TEST_CASE("resolvent examples") {
    const TreeSample lone = tree_from_graph(Graph(1), 0);
    const std::complex<double> i(0.0, 1.0);
    CHECK(std::abs(resolvent_root(lone, i) - i) < 1e-15);
    std::vector<double> energy{0.0}, out(1);
    accumulate_root_density(lone, energy, 1.0, out);
    CHECK(out[0] == doctest::Approx(1.0 / std::numbers::pi));

    // Single edge: spectral measure (delta_1 + delta_-1) / 2 at either end.
    const TreeSample edge = tree_from_graph(path_graph(2), 0);
    for (double eta : {1.0, 0.2, 0.01}) {
      const std::complex<double> z(0.3, eta);
      const std::complex<double> oracle = 0.5 / (1.0 - z) + 0.5 / (-1.0 - z);
      CHECK(std::abs(resolvent_root(edge, z) - oracle) < 1e-12);
    }
  }

  TEST_CASE("resolvent values lie in the Herglotz class") {
    Rng rng = make_stream(6);
    for (int k = 0; k < 100; ++k) {
      const TreeSample t = sample_gwt(poisson_model(2.0), 6, rng);
      for (double eta : {1.0, 0.05}) {
        const std::complex<double> z(-0.7 + 0.02 * k, eta);
        for (const auto& m : resolvent_all(t, z)) {
          REQUIRE(m.imag() >= 0.0);
          REQUIRE(std::abs(m) <= 1.0 / eta + 1e-12);
        }
      }
    }
  }

  TEST_CASE("resolvent density integrates to about one") {
    DensityOptions opts;
    opts.eta = 0.05;
    opts.depth = 6;
    opts.samples = 200;
    std::vector<double> energies;
    for (int k = -800; k <= 800; ++k) energies.push_back(k * 0.01);
    const DensityEstimate d = resolvent_density(poisson_model(2.0), energies, opts);
    double mass = 0.0;
    for (double v : d.density) mass += v * 0.01;
    CHECK(mass == doctest::Approx(1.0).epsilon(0.01));
    CHECK(d.samples == 200);
  }
}
