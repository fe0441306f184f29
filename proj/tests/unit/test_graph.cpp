#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nullity/generators.hpp"
#include "nullity/graph.hpp"
#include "support.hpp"

using namespace nullity;
using namespace nullity::testing;

TEST_SUITE("graph_lab") {
  TEST_CASE("Graph construction and queries") {
    const Graph g = graph_of(4, {{0, 1}, {1, 2}, {0, 3}});
    CHECK(g.num_vertices() == 4);
    CHECK(g.num_edges() == 3);
    CHECK(g.degree(0) == 2);
    CHECK(g.has_edge(3, 0));
    CHECK_FALSE(g.has_edge(2, 3));
    CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});
    CHECK_THROWS_AS(graph_of(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(graph_of(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(graph_of(3, {{0, 3}}), std::invalid_argument);
  }

  TEST_CASE("induced subgraph and relabel") {
    const Graph g = cycle_graph(5);
    const std::vector<std::uint32_t> keep{0, 1, 2, 4};
    const InducedSubgraph sub = induced_subgraph(g, keep);
    CHECK(sub.graph.num_edges() == 3);
    CHECK(sub.graph.has_edge(0, 3));
    const std::vector<std::uint32_t> perm{4, 3, 2, 1, 0};
    const Graph r = relabel(g, perm);
    CHECK(r.num_edges() == 5);
    CHECK(r.has_edge(4, 3));
    CHECK(relabel(r, perm) == g);
  }

  TEST_CASE("edge list round trip keeps isolated vertices") {
    const Graph g = graph_of(6, {{0, 2}, {2, 3}});
    std::stringstream buf;
    write_edge_list(g, buf);
    CHECK(read_edge_list(buf) == g);

    std::istringstream plain("# a comment\n1 2\n2 1\n\n0 2\n");
    const Graph h = read_edge_list(plain);
    CHECK(h.num_vertices() == 3);
    CHECK(h.num_edges() == 2);
    std::istringstream loop("0 0\n");
    CHECK_THROWS_AS(read_edge_list(loop), std::runtime_error);
    std::istringstream junk("0 x\n");
    CHECK_THROWS_AS(read_edge_list(junk), std::runtime_error);
  }

  TEST_CASE("Erdos-Renyi generator") {
    CHECK(gen_erdos_renyi(1, 0.5, 1).num_edges() == 0);
    CHECK_THROWS_AS(gen_erdos_renyi(10, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_erdos_renyi(10, 10.0, 1), std::invalid_argument);
    CHECK(gen_erdos_renyi(500, 2.0, 3) == gen_erdos_renyi(500, 2.0, 3));

    const std::size_t n = 100'000;
    const double c = 2.0;
    const Graph g = gen_erdos_renyi(n, c, 7);
    const double pairs = n * (n - 1) / 2.0, p = c / n;
    const double mean = pairs * p, sigma = std::sqrt(pairs * p * (1 - p));
    CHECK(std::abs(static_cast<double>(g.num_edges()) - mean) < 4 * sigma);
  }

  TEST_CASE("Erdos-Renyi degree of one vertex is Poisson") {
    const double c = 2.0;
    const std::size_t n = 200, seeds = 10'000, bins = 7;
    std::vector<double> counts(bins, 0.0);
    for (std::size_t s = 0; s < seeds; ++s) {
      const std::size_t d = gen_erdos_renyi(n, c, s).degree(1);
      ++counts[std::min(d, bins - 1)];
    }
    // Binomial(n - 1, c / n) cell probabilities, last cell the upper tail.
    std::vector<double> expected(bins, 0.0);
    const double p = c / n;
    double tail = 1.0;
    for (std::size_t k = 0; k + 1 < bins; ++k) {
      expected[k] = std::exp(std::lgamma(n) - std::lgamma(k + 1.0) - std::lgamma(n - k) +
                             k * std::log(p) + (n - 1.0 - k) * std::log1p(-p));
      tail -= expected[k];
    }
    expected[bins - 1] = tail;
    double chi2 = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double e = expected[k] * seeds;
      chi2 += (counts[k] - e) * (counts[k] - e) / e;
    }
    // 6 degrees of freedom: the 0.999 quantile is 22.46.
    CHECK(chi2 < 22.46);
  }

  TEST_CASE("configuration model on 2-regular laws gives cycles") {
    const ConfigurationResult r = gen_configuration(2000, regular_model(2), 5);
    for (const auto& [d, count] : r.drawn_degree_histogram) CHECK(d == 2);
    CHECK_FALSE(r.parity_adjusted);
    for (std::uint32_t v = 0; v < 2000; ++v) CHECK(r.graph.degree(v) <= 2);
    CHECK(r.half_edges == 4000);
  }

  TEST_CASE("configuration model keeps the degree law") {
    const std::size_t n = 10'000;
    const ConfigurationResult reg = gen_configuration(n, regular_model(3), 2);
    CHECK(reg.parity_adjusted == false);
    const double full = reg.realized_degree_histogram.count(3) ? reg.realized_degree_histogram.at(3) : 0;
    CHECK(full / n >= 0.99);

    const ConfigurationResult mix = gen_configuration(n, mixture_model(3), 2);
    const std::map<std::size_t, double> target{{3, 0.75}, {27, 0.25}};
    auto tv_to_target = [&](const std::map<std::size_t, std::size_t>& hist) {
      std::map<std::size_t, double> diff(target.begin(), target.end());
      for (const auto& [d, count] : hist) diff[d] -= static_cast<double>(count) / n;
      double tv = 0.0;
      for (const auto& [d, x] : diff) tv += std::abs(x);
      return tv / 2;
    };
    CHECK(tv_to_target(mix.drawn_degree_histogram) < 0.01);
    // Erasure moves about 2% of the mass off {3, 27} at this size; a numpy
    // Monte Carlo of the same construction gives TV in [0.017, 0.023].
    CHECK(tv_to_target(mix.realized_degree_histogram) < 0.03);
    CHECK(mix.erased_fraction() < 0.01);
  }

  TEST_CASE("configuration model fixes parity") {
    bool adjusted = false;
    for (std::uint64_t s = 0; s < 10 && !adjusted; ++s) {
      const ConfigurationResult r = gen_configuration(101, parse_model("pmf:1:0.5,2:0.5"), s);
      CHECK(r.half_edges % 2 == 0);
      adjusted = r.parity_adjusted;
    }
    CHECK(adjusted);
  }

  TEST_CASE("parse_graph_family") {
    const GraphFamily er = parse_graph_family("er:c=2.5");
    CHECK(er.kind == GraphFamily::Kind::kErdosRenyi);
    CHECK(er.c == 2.5);
    CHECK(er.model.label() == "poisson:c=2.5");
    const GraphFamily cm = parse_graph_family("mixture:d=3");
    CHECK(cm.kind == GraphFamily::Kind::kConfiguration);
    CHECK(cm.c == doctest::Approx(9.0));
    CHECK_THROWS_AS(parse_graph_family("er:d=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_family("er:c=-1"), std::invalid_argument);
    CHECK(cm.generate(300, 4) == cm.generate(300, 4));
  }
}
