#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "nullity/experiment.hpp"

namespace nullity {

namespace {

using Json = nlohmann::ordered_json;

Json header(const char* kind) {
  Json j;
  j["schema"] = kReportSchema;
  j["kind"] = kind;
  j["version"] = kVersion;
  return j;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json model_json(const DegreeModel& model) {
  Json j;
  j["spec"] = model.label();
  j["mean"] = model.mean();
  j["second_moment"] = model.second_moment();
  j["max_degree"] = model.max_degree();
  return j;
}

Json theory_block(const TheoryBlock& t) {
  const RecordSet& r = t.records;
  Json j;
  Json records = Json::array();
  for (std::size_t i = 0; i < r.locations.size(); ++i) {
    records.push_back({{"x", r.locations[i]}, {"M", r.values[i]}});
  }
  Json fixed = Json::array();
  for (const FixedPoint& fp : r.fixed_points) {
    fixed.push_back({{"x", fp.x}, {"M", fp.M}, {"tangential", fp.tangential}});
  }
  j["records"] = records;
  j["fixed_points"] = fixed;
  j["ambiguous"] = r.ambiguous;
  j["x0"] = r.first_extremum;
  j["M_x0"] = r.first_extremum_value;
  j["max_M"] = r.global_max;
  j["argmax_M"] = r.global_argmax;
  j["degenerate"] = r.degenerate;
  j["log_concavity"] = to_string(t.log_concavity);
  j["point_prediction"] = t.point_prediction;
  if (t.erdos_renyi) {
    j["erdos_renyi"] = {{"q", t.erdos_renyi->q},
                        {"kernel_mass", t.erdos_renyi->kernel_mass},
                        {"iterations", t.erdos_renyi->iterations},
                        {"converged", t.erdos_renyi->converged}};
  }
  return j;
}

Json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"samples", e.samples}};
}

Json rde_block(const RdeBlock& r) {
  Json j;
  j["start_p"] = r.start_p;
  j["pool"] = r.pool;
  j["iterations"] = r.iterations;
  j["seed"] = r.seed;
  j["root_mean"] = estimate_json(r.root_mean);
  j["start_is_fixed_point"] = r.diagnostics.start_is_fixed_point;
  j["start_gap"] = r.diagnostics.start_gap;
  j["nonzero_mass_trace"] = r.diagnostics.nonzero_mass;
  j["mean_trace"] = r.diagnostics.mean;
  if (!r.diagnostics.warning.empty()) j["warning"] = r.diagnostics.warning;
  return j;
}

Json atom_block(const SpectralBlock& s) {
  const AtomGridEstimate& a = s.atom;
  Json j;
  j["seed"] = s.seed;
  j["samples"] = a.samples;
  j["discarded"] = a.discarded;
  j["depths"] = a.depths;
  j["t"] = a.t_values;
  j["estimate"] = a.estimate;
  j["std_error"] = a.std_error;
  j["headline"] = {{"value", a.headline()}, {"std_error", a.headline_error()}};
  j["monotone_in_t"] = a.monotone_in_t;
  j["monotone_in_depth"] = a.monotone_in_depth;
  return j;
}

Json run_json(const SimulationRun& r) {
  Json ranks = Json::array();
  for (const PrimeRank& p : r.ranks) {
    ranks.push_back({{"prime", p.prime}, {"rank", p.rank}, {"method", to_string(p.method)}});
  }
  return {{"n", r.n},
          {"seed", r.seed},
          {"edges", r.edges},
          {"kernel_fraction", r.kernel_fraction},
          {"lr_fraction", r.lr_fraction},
          {"core_fraction", r.core_fraction},
          {"core_kernel_fraction", r.core_kernel_fraction},
          {"primes_agree", r.primes_agree},
          {"ranks", ranks}};
}

Json verdict_json(const Verdict& v) {
  return {{"name", v.name},       {"kind", v.kind},         {"value", number(v.value)},
          {"lower", number(v.lower)}, {"upper", number(v.upper)}, {"tolerance", v.tolerance},
          {"passed", v.passed},   {"fatal", v.fatal},       {"detail", v.detail}};
}

Json config_json(const PipelineConfig& c) {
  Json tol = {{"simulation", c.tol.simulation}, {"rde", c.tol.rde},   {"bracket", c.tol.bracket},
              {"ks", c.tol.ks},                 {"cdf", c.tol.cdf},   {"record", c.tol.record}};
  return {{"model", c.model},
          {"sizes", c.sizes},
          {"seeds", c.seeds},
          {"master_seed", c.seed},
          {"workers", c.workers},
          {"primes", c.primes},
          {"ks_preprocess", c.ks_preprocess},
          {"stages",
           {{"rde", c.run_rde}, {"spectral", c.run_spectral}, {"simulation", c.run_simulation}}},
          {"ks_rounds", c.ks_rounds},
          {"rde_pool", c.rde_pool},
          {"rde_iterations", c.rde_iterations},
          {"root_resamples", c.root_resamples},
          {"depths", c.depths},
          {"t", c.t_values},
          {"tree_samples", c.tree_samples},
          {"node_cap", c.node_cap},
          {"tolerances", tol}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string report_to_json(const Report& report) {
  Json j = header("pipeline");
  j["config"] = config_json(report.config);
  if (report.theory) j["theory"] = theory_block(*report.theory);
  if (report.rde) j["rde"] = rde_block(*report.rde);
  if (report.spectral) j["spectral"] = atom_block(*report.spectral);
  if (!report.simulation.empty()) {
    Json runs = Json::array();
    for (const SimulationRun& r : report.simulation) runs.push_back(run_json(r));
    j["simulation"] = runs;
  }
  if (report.leaf_removal) {
    const LeafRemovalBlock& lr = *report.leaf_removal;
    j["leaf_removal"] = {{"n", lr.empirical.n},
                         {"seeds", lr.empirical.seeds},
                         {"empirical_p_in_a", lr.empirical.p_in_a},
                         {"empirical_p_in_b", lr.empirical.p_in_b},
                         {"empirical_lr", lr.empirical.lr},
                         {"empirical_lr_std_error", lr.empirical.lr_std_error},
                         {"theory_p_in_a", lr.theory.p_in_a},
                         {"theory_p_in_b", lr.theory.p_in_b},
                         {"theory_lr", lr.theory.lr},
                         {"max_lr_gap", lr.max_lr_gap}};
  }
  Json verdicts = Json::array();
  for (const Verdict& v : report.verdicts) verdicts.push_back(verdict_json(v));
  j["verdicts"] = verdicts;
  j["warnings"] = report.warnings;
  j["passed"] = report.passed();
  return dump(j);
}

std::string simulation_csv(const Report& report) {
  std::ostringstream out;
  out << "n,seed,edges,kernel_fraction,lr_fraction,core_fraction,core_kernel_fraction,primes_agree\n";
  out << std::setprecision(12);
  for (const SimulationRun& r : report.simulation) {
    out << r.n << ',' << r.seed << ',' << r.edges << ',' << r.kernel_fraction << ','
        << r.lr_fraction << ',' << r.core_fraction << ',' << r.core_kernel_fraction << ','
        << (r.primes_agree ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string theory_json(const DegreeModel& model, const TheoryBlock& theory,
                        const KSTrajectory& trajectory) {
  Json j = header("theory");
  j["model"] = model_json(model);
  j["theory"] = theory_block(theory);
  j["leaf_removal_limit"] = {{"alpha", trajectory.alpha},
                             {"beta", trajectory.beta},
                             {"p_in_a", trajectory.p_in_a},
                             {"p_in_b", trajectory.p_in_b},
                             {"lr", trajectory.lr}};
  return dump(j);
}

std::string rde_json(const DegreeModel& model, const RdeBlock& rde, double theory_value) {
  Json j = header("rde");
  j["model"] = model_json(model);
  j["rde"] = rde_block(rde);
  j["theory_M_at_start"] = theory_value;
  return dump(j);
}

std::string spectral_json(const DegreeModel& model, const SpectralBlock& spectral) {
  Json j = header("spectral");
  j["model"] = model_json(model);
  j["spectral"] = atom_block(spectral);
  return dump(j);
}

std::string density_json(const DegreeModel& model, const DensityEstimate& density,
                         const DensityOptions& options) {
  Json j = header("density");
  j["model"] = model_json(model);
  j["eta"] = density.eta;
  j["depth"] = options.depth;
  j["seed"] = options.seed;
  j["samples"] = density.samples;
  j["discarded"] = density.discarded;
  j["energies"] = density.energies;
  j["density"] = density.density;
  j["std_error"] = density.std_error;
  return dump(j);
}

std::string rank_json(const Graph& g, const KernelDimension& kernel) {
  const KernelCertificate& c = kernel.certificate;
  Json j = header("rank");
  j["vertices"] = g.num_vertices();
  j["edges"] = g.num_edges();
  j["kernel_dim"] = kernel.dim;
  j["rank"] = g.num_vertices() - kernel.dim;
  j["kernel_fraction"] =
      g.num_vertices() == 0 ? 0.0 : static_cast<double>(kernel.dim) / static_cast<double>(g.num_vertices());
  Json ranks = Json::array();
  for (const PrimeRank& p : c.ranks) {
    ranks.push_back({{"prime", p.prime}, {"rank", p.rank}, {"method", to_string(p.method)}});
  }
  j["certificate"] = {{"preprocessed", c.preprocessed},
                      {"leaf_removal_lr", c.leaf_removal_lr},
                      {"core_vertices", c.core_vertices},
                      {"core_edges", c.core_edges},
                      {"core_kernel", kernel.core_kernel},
                      {"ranks", ranks},
                      {"primes_agree", c.primes_agree},
                      {"rational_checked", c.rational_checked}};
  if (c.rational_checked) j["certificate"]["rational_rank"] = c.rational_rank;
  return dump(j);
}

}  // namespace nullity
