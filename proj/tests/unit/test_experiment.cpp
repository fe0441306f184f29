#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "nullity/experiment.hpp"

using namespace nullity;

namespace {

PipelineConfig quick(const std::string& model) {
  PipelineConfig c;
  c.model = model;
  c.sizes = {1000};
  c.seeds = 3;
  c.rde_pool = 5000;
  c.rde_iterations = 30;
  c.root_resamples = 5000;
  c.depths = {4, 6};
  c.t_values = {1e-1, 1e-2};
  c.tree_samples = 200;
  return c;
}

bool has_kind(const Report& r, const std::string& kind) {
  for (const Verdict& v : r.verdicts) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("theory block") {
    const TheoryBlock er = run_theory(parse_graph_family("er:c=1").model);
    REQUIRE(er.erdos_renyi.has_value());
    CHECK(er.erdos_renyi->kernel_mass == doctest::Approx(0.455938092676404194).epsilon(1e-12));
    CHECK(er.point_prediction);
    const TheoryBlock mix = run_theory(mixture_model(3));
    CHECK_FALSE(mix.erdos_renyi.has_value());
    CHECK_FALSE(mix.point_prediction);
    CHECK(mix.log_concavity == LogConcavityReport::Verdict::kNotLogConcave);
  }

  TEST_CASE("pipeline on a point-prediction model") {
    const Report r = run_pipeline(quick("poisson:c=1"));
    REQUIRE(r.theory);
    REQUIRE(r.rde);
    REQUIRE(r.spectral);
    CHECK(r.simulation.size() == 3);
    CHECK(has_kind(r, "point"));
    for (const SimulationRun& run : r.simulation) CHECK(run.primes_agree);
  }

  TEST_CASE("mixture reports brackets only") {
    PipelineConfig c = quick("mixture:d=3");
    c.run_rde = false;
    c.run_spectral = false;
    const Report r = run_pipeline(c);
    CHECK(has_kind(r, "bracket"));
    CHECK_FALSE(has_kind(r, "point"));
  }

  TEST_CASE("reports are reproducible and worker independent") {
    PipelineConfig c = quick("poisson:c=2");
    c.ks_rounds = 3;
    const std::string a = report_to_json(run_pipeline(c));
    c.workers = 3;
    const std::string b = report_to_json(run_pipeline(c));
    // The echoed worker count is the only difference.
    auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
    ja["config"].erase("workers");
    jb["config"].erase("workers");
    CHECK(ja == jb);
    c.workers = 1;
    CHECK(report_to_json(run_pipeline(c)) == a);
  }

  TEST_CASE("report json shape") {
    PipelineConfig c = quick("regular:d=3");
    c.run_spectral = false;
    const Report r = run_pipeline(c);
    const auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["version"] == kVersion);
    CHECK(j["theory"]["max_M"].get<double>() == doctest::Approx(0.0));
    for (const auto& run : j["simulation"]) {
      CHECK(run.contains("seed"));
      CHECK(run["kernel_fraction"].get<double>() < 0.005);
    }
    CHECK(j["rde"]["root_mean"]["samples"] == 5000);
    for (const auto& v : j["verdicts"]) CHECK(v.contains("tolerance"));
    const std::string csv = simulation_csv(r);
    CHECK(csv.rfind("n,seed,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }

  TEST_CASE("stage failures name the stage") {
    PipelineConfig c = quick("nonsense:x=1");
    CHECK_THROWS_WITH_AS(run_pipeline(c), doctest::Contains("config"), StageError);
    c = quick("poisson:c=2");
    c.depths = {5};
    try {
      run_pipeline(c);
      FAIL("expected a stage error");
    } catch (const StageError& e) {
      CHECK(e.stage() == "spectral");
    }
  }

  TEST_CASE("m curve csv") {
    std::ostringstream out;
    emit_m_curve(regular_model(3), 11, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,M,xbar,Mprime");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 11);
  }
}
