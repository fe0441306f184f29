#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nullity/cavity.hpp"
#include "nullity/population.hpp"

using namespace nullity;

TEST_SUITE("rde_population") {
  TEST_CASE("theta_step on constant populations") {
    const Pmf two({0.0, 0.0, 1.0});
    const Population ones = Population::constant(1.0, 5000);
    const Population halves = theta_step(ones, two, two, 3, 0);
    for (double y : halves.samples()) CHECK(y == 0.5);
    const Population zeros = Population::constant(0.0, 5000);
    const Population out = theta_step(zeros, two, two, 3, 0);
    CHECK(out.zero_count() == out.size());
  }

  TEST_CASE("theta_step does not depend on the worker count") {
    const DegreeModel m = poisson_model(2.0);
    const OffspringModel f = size_biased(m);
    const Population pop = Population::bernoulli(0.4, 10'000, 1);
    const Population a = theta_step(pop, f.law, f.law, 11, 2, 1);
    const Population b = theta_step(pop, f.law, f.law, 11, 2, 4);
    CHECK(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
  }

  TEST_CASE("coupled steps preserve pointwise order") {
    const OffspringModel f = size_biased(poisson_model(2.5));
    Rng rng = make_stream(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> lo(4000), hi(4000);
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] = u(rng) < 0.3 ? 0.0 : u(rng);
      hi[i] = std::min(1.0, lo[i] + 0.5 * u(rng));
    }
    Population a(lo), b(hi);
    for (std::uint64_t round = 0; round < 100; ++round) {
      a = theta_step(a, f.law, f.law, 17, round);
      b = theta_step(b, f.law, f.law, 17, round);
      bool ordered = true;
      for (std::size_t i = 0; i < a.size(); ++i) ordered = ordered && a.samples()[i] <= b.samples()[i];
      REQUIRE(ordered);
    }
    const Population sa = a.sorted(), sb = b.sorted();
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa.samples()[i] <= sb.samples()[i]);
  }

  TEST_CASE("one step from Bernoulli(p) has nonzero mass xbarbar(p)") {
    const DegreeModel m = poisson_model(2.0);
    const OffspringModel f = size_biased(m);
    const CavityFunctions cav(m);
    const std::size_t pool = 100'000;
    for (int k = 1; k <= 9; ++k) {
      const double p = k / 10.0;
      const Population out = theta_step(Population::bernoulli(p, pool), f.law, f.law, 23, k);
      const double expected = cav.xbarbar(p);
      const double sigma = std::sqrt(expected * (1 - expected) / pool);
      CAPTURE(p);
      CHECK(std::abs(out.nonzero_mass() - expected) < 4 * sigma);
    }
  }

  TEST_CASE("solve_rde on regular:d=3 from zero stays at zero") {
    RdeOptions opts;
    opts.pool = 2000;
    opts.iterations = 20;
    const RdeResult r = solve_rde(regular_model(3), 0.0, opts);
    CHECK(r.population.zero_count() == r.population.size());
    CHECK(r.population.mean() == 0.0);
    CHECK(root_mean(r.population, regular_model(3), 1000, 1).value == 0.0);
  }

  TEST_CASE("solve_rde mass stabilizes at q for poisson:c=2") {
    const DegreeModel m = poisson_model(2.0);
    const double q = er_q(2.0).q;
    RdeOptions opts;
    opts.pool = 50'000;
    opts.iterations = 60;
    opts.seed = 9;
    const RdeResult r = solve_rde(m, q, opts);
    CHECK(r.diagnostics.start_is_fixed_point);
    const double sigma = std::sqrt(q * (1 - q) / opts.pool);
    CHECK(std::abs(r.population.nonzero_mass() - q) < 3 * sigma);
    // Started from above, the mean decreases after the first step.
    for (std::size_t i = 2; i < r.diagnostics.mean.size(); ++i) {
      CHECK(r.diagnostics.mean[i] <= r.diagnostics.mean[i - 1] + 4 * 0.5 / std::sqrt(opts.pool));
    }
  }

  TEST_CASE("solve_rde warns when the start is not a fixed point") {
    RdeOptions opts;
    opts.pool = 1000;
    opts.iterations = 1;
    const RdeResult r = solve_rde(poisson_model(2.0), 0.9, opts);
    CHECK_FALSE(r.diagnostics.start_is_fixed_point);
    CHECK_FALSE(r.diagnostics.warning.empty());
  }

  TEST_CASE("mixture:d=3 populations from the two records are ordered") {
    const DegreeModel m = mixture_model(3);
    const RecordSet rec = find_records(m);
    REQUIRE(rec.locations.size() == 2);
    RdeOptions opts;
    opts.pool = 20'000;
    opts.iterations = 40;
    const Population low = solve_rde(m, rec.locations[0], opts).population;
    const Population high = solve_rde(m, rec.locations[1], opts).population;
    CHECK(high.nonzero_mass() > low.nonzero_mass() + 0.05);
    for (double q : {0.5, 0.75, 0.9, 0.99}) CHECK(high.quantile(q) >= low.quantile(q));
  }

  TEST_CASE("root_mean matches M at the record") {
    struct Case {
      double c;
      double expected;
    };
    const double q3 = er_q(3.0).q;
    for (const Case& cs : {Case{1.0, 0.455938092676404194}, Case{3.0, eval_M(poisson_model(3.0), q3)}}) {
      CAPTURE(cs.c);
      const DegreeModel m = poisson_model(cs.c);
      RdeOptions opts;
      opts.pool = 50'000;
      opts.iterations = 150;
      opts.seed = 4;
      const RdeResult r = solve_rde(m, find_records(m).global_argmax, opts);
      const Estimate e = root_mean(r.population, m, 200'000, 8);
      CHECK(e.std_error > 0.0);
      CHECK(std::abs(e.value - cs.expected) < 3 * e.std_error + 0.003);
    }
  }

  TEST_CASE("argument validation") {
    CHECK_THROWS_AS(Population::bernoulli(1.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(Population::bernoulli(0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(Population(std::vector<double>{0.5, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(root_mean(Population::constant(1.0, 10), poisson_model(1.0), 5, 1),
                    std::invalid_argument);
  }
}
