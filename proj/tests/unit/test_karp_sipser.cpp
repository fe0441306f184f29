#include <doctest.h>

#include <algorithm>

#include "nullity/cavity.hpp"
#include "nullity/karp_sipser.hpp"
#include "nullity/rational.hpp"
#include "support.hpp"

using namespace nullity;
using namespace nullity::testing;

namespace {

std::vector<std::uint32_t> mapped(const std::vector<std::uint32_t>& set,
                                  const std::vector<std::uint32_t>& perm) {
  std::vector<std::uint32_t> out;
  for (auto v : set) out.push_back(perm[v]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> sorted_union(const KSResult& r) {
  std::vector<std::uint32_t> all = r.a_set;
  all.insert(all.end(), r.b_set.begin(), r.b_set.end());
  all.insert(all.end(), r.p_set.begin(), r.p_set.end());
  std::sort(all.begin(), all.end());
  return all;
}

// Small graphs from a mix of families, including isolated vertices and trees.
Graph battery_graph(int i, Rng& rng) {
  std::uniform_int_distribution<std::size_t> size(1, 30);
  const std::size_t n = size(rng);
  switch (i % 4) {
    case 0:
      return random_gnp(n, 1.5 / n, rng);
    case 1:
      return random_gnp(n, 3.0 / n, rng);
    case 2:
      return random_tree(n, rng);
    default:
      return random_gnp(n, std::min(1.0, 6.0 / n), rng);
  }
}

}  // namespace

TEST_SUITE("karp_sipser") {
  TEST_CASE("single edge") {
    const KSResult r = karp_sipser(path_graph(2));
    CHECK(r.p_set == std::vector<std::uint32_t>{0, 1});
    CHECK(r.lr() == 0);
    CHECK(r.core.vertices.empty());
  }

  TEST_CASE("star K_{1,3}") {
    const Graph g = star_graph(3);
    const KSResult r = karp_sipser(g);
    CHECK(r.a_set == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(r.b_set == std::vector<std::uint32_t>{0});
    CHECK(r.lr() == 2);
    CHECK(r.core.vertices.empty());
    CHECK(g.num_vertices() - rational_rank_oracle(g) == 2);
  }

  TEST_CASE("cycle C_4 is all core") {
    const Graph g = cycle_graph(4);
    const KSResult r = karp_sipser(g);
    CHECK(r.a_set.empty());
    CHECK(r.b_set.empty());
    CHECK(r.p_set.empty());
    CHECK(r.lr() == 0);
    CHECK(r.core.graph == g);
    CHECK(g.num_vertices() - rational_rank_oracle(g) == 2);
  }

  TEST_CASE("isolated vertices and vertices isolated mid-run") {
    // Path 3-1-0-2-4 plus the isolated vertex 5. Round 0 removes leaves 3, 4
    // with 1, 2, which leaves 0 isolated; it enters A in round 2.
    const Graph g = graph_of(6, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
    const KSResult r = karp_sipser(g);
    CHECK(r.a_set == std::vector<std::uint32_t>{0, 3, 4, 5});
    CHECK(r.b_set == std::vector<std::uint32_t>{1, 2});
    CHECK(r.lr() == 2);
    CHECK(r.entered[5] == 0);
    CHECK(r.entered[0] == 2);
    CHECK(r.lr_trace.front() == 1);
    CHECK(static_cast<std::size_t>(r.lr()) == g.num_vertices() - rational_rank_oracle(g));
  }

  TEST_CASE("path P_4 by rounds") {
    const KSResult r = karp_sipser(path_graph(4));
    CHECK(r.a_set == std::vector<std::uint32_t>{0, 3});
    CHECK(r.b_set == std::vector<std::uint32_t>{1, 2});
    CHECK(r.lr() == 0);
    CHECK(r.rounds == 1);
  }

  TEST_CASE("core has minimum degree two") {
    Rng rng = make_stream(11);
    for (int i = 0; i < 300; ++i) {
      const Graph g = battery_graph(i, rng);
      const KSResult r = karp_sipser(g);
      for (std::uint32_t v = 0; v < r.core.graph.num_vertices(); ++v) REQUIRE(r.core.graph.degree(v) >= 2);
      for (std::uint32_t v : r.core.vertices) REQUIRE(r.label[v] == LeafLabel::kCore);
      REQUIRE(r.a_set.size() + r.b_set.size() + r.p_set.size() + r.core.vertices.size() ==
              g.num_vertices());
    }
  }

  TEST_CASE("relabeling commutes with leaf removal") {
    Rng rng = make_stream(12);
    for (int i = 0; i < 300; ++i) {
      const Graph g = battery_graph(i, rng);
      const auto perm = random_permutation(g.num_vertices(), rng);
      const KSResult a = karp_sipser(g);
      const KSResult b = karp_sipser(relabel(g, perm));
      REQUIRE(mapped(a.a_set, perm) == b.a_set);
      REQUIRE(mapped(a.b_set, perm) == b.b_set);
      REQUIRE(mapped(a.p_set, perm) == b.p_set);
      REQUIRE(mapped(a.core.vertices, perm) == b.core.vertices);
      REQUIRE(a.lr_trace == b.lr_trace);
    }
  }

  TEST_CASE("queue variant removes the same vertices") {
    Rng rng = make_stream(13);
    for (int i = 0; i < 300; ++i) {
      const Graph g = battery_graph(i, rng);
      const KSResult a = karp_sipser(g);
      const KSResult b = karp_sipser_queue(g);
      REQUIRE(sorted_union(a) == sorted_union(b));
      REQUIRE(a.core.vertices == b.core.vertices);
      REQUIRE(a.lr() == b.lr());
    }
  }

  TEST_CASE("leaf removal identity on small graphs") {
    Rng rng = make_stream(14);
    for (int i = 0; i < 400; ++i) {
      const Graph g = battery_graph(i, rng);
      const KSResult r = karp_sipser(g);
      const auto dim = static_cast<std::int64_t>(g.num_vertices() - rational_rank_oracle(g));
      for (std::int64_t lr : r.lr_trace) REQUIRE(dim >= lr);
      const auto core_dim =
          static_cast<std::int64_t>(r.core.graph.num_vertices() - rational_rank_oracle(r.core.graph));
      REQUIRE(dim == r.lr() + core_dim);
    }
  }

  TEST_CASE("round marginals") {
    const KSMarginals reg = ks_round_marginals(parse_graph_family("regular:d=3"), 4, 2000, 2, 1);
    for (double v : reg.p_in_a) CHECK(v < 0.01);
    for (double v : reg.p_in_b) CHECK(v < 0.01);

    const KSMarginals a = ks_round_marginals(parse_graph_family("poisson:c=2"), 3, 3000, 3, 5, 1);
    const KSMarginals b = ks_round_marginals(parse_graph_family("poisson:c=2"), 3, 3000, 3, 5, 3);
    CHECK(a.lr == b.lr);
    CHECK(a.p_in_a.size() == 4);
  }

  TEST_CASE("round one A marginal matches the limiting formula") {
    // P(root in A_1) = phi_*(beta_0) + (1 - beta_0 - alpha_1) phi_*'(beta_0).
    const DegreeModel m = poisson_model(2.0);
    const KSTrajectory t = ks_trajectory(m, 3);
    const double formula = gf_eval(m, t.beta[0], 0) + (1 - t.beta[0] - t.alpha[1]) * gf_eval(m, t.beta[0], 1);
    const KSMarginals emp = ks_round_marginals(parse_graph_family("poisson:c=2"), 3, 50'000, 4, 2);
    CHECK(std::abs(t.p_in_a[1] - formula) < 1e-12);
    CHECK(std::abs(emp.p_in_a[1] - formula) < 0.01);
  }
}
