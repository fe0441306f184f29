#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nullity/experiment.hpp"
#include "nullity/graph.hpp"
#include "nullity/prime_field.hpp"
#include "nullity/spectrum.hpp"

namespace fs = std::filesystem;
using namespace nullity;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitError = 2;

struct Common {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string json_path;
  std::string csv_path;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--seed", common.seed, "master seed")->capture_default_str();
  sub->add_option("--workers", common.workers, "worker threads; results do not depend on it")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1024u));
  sub->add_option("--json", common.json_path, "write the JSON report here ('-' for stdout)");
  sub->add_option("--csv", common.csv_path, "write CSV data here, with a JSON sidecar");
}

// Relative paths land in $NULLITY_OUT_DIR when it is set.
fs::path resolve(const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("NULLITY_OUT_DIR"); dir && *dir) return fs::path(dir) / p;
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

fs::path sidecar(const fs::path& csv) {
  fs::path p = csv;
  p += ".json";
  return p;
}

// JSON goes to --json, to the CSV sidecar when --csv is given, and to stdout
// when neither is.
void emit(const Common& common, const std::string& json, const std::string& csv) {
  if (!common.csv_path.empty()) {
    if (csv.empty()) throw std::runtime_error("this command has no CSV output");
    const fs::path path = resolve(common.csv_path);
    write_file(path, csv);
    write_file(sidecar(path), json);
  }
  if (common.json_path == "-" || (common.json_path.empty() && common.csv_path.empty())) {
    std::cout << json;
  } else if (!common.json_path.empty()) {
    write_file(resolve(common.json_path), json);
  }
}

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(15) << x;
  return out.str();
}

DegreeModel model_from(const std::string& spec) { return parse_graph_family(spec).model; }

// --start-p takes a number, "max" for the argmax of M, or "record:i".
double resolve_start(const std::string& text, const RecordSet& records) {
  if (text == "max") return records.global_argmax;
  if (text.rfind("record:", 0) == 0) {
    const std::size_t i = std::stoul(text.substr(7));
    if (i >= records.locations.size()) {
      throw std::invalid_argument("record index " + std::to_string(i) + " out of range; " +
                                  std::to_string(records.locations.size()) + " records");
    }
    return records.locations[i];
  }
  std::size_t used = 0;
  const double p = std::stod(text, &used);
  if (used != text.size() || !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("start p must lie in [0, 1]");
  }
  return p;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

int report_exit(const Report& report) {
  for (const Verdict& v : report.verdicts) {
    std::cerr << (v.passed ? "pass " : (v.fatal ? "FAIL " : "warn ")) << v.name << " value=" << fmt(v.value)
              << " range=[" << fmt(v.lower) << ", " << fmt(v.upper) << "]\n";
  }
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
  return report.passed() ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel dimension of sparse random graph adjacency matrices"};
  app.set_version_flag("--version", std::string("nullity ") + kVersion);
  app.require_subcommand(1);

  Common common;
  std::string model_spec = "poisson:c=1";
  int exit_code = kExitOk;

  // theory
  std::size_t ks_rounds = 6;
  std::size_t grid = 1001;
  auto* theory = app.add_subcommand("theory", "records of M, x_0, max M and the leaf-removal limit");
  theory->add_option("--model", model_spec, "degree model or er:c=<c>")->capture_default_str();
  theory->add_option("--rounds", ks_rounds, "leaf-removal rounds in the limiting trajectory")
      ->capture_default_str();
  theory->add_option("--grid", grid, "points on the M curve written by --csv")->capture_default_str();
  add_common(theory, common);
  theory->callback([&] {
    const DegreeModel model = model_from(model_spec);
    const TheoryBlock block = run_theory(model);
    std::ostringstream curve;
    if (!common.csv_path.empty()) emit_m_curve(model, grid, curve);
    emit(common, theory_json(model, block, ks_trajectory(model, ks_rounds)), curve.str());
  });

  // rde
  std::string start = "max";
  std::size_t pool = 100'000, iterations = 300, resamples = 100'000;
  auto* rde = app.add_subcommand("rde", "population dynamics for the distributional fixed point");
  rde->add_option("--model", model_spec)->capture_default_str();
  rde->add_option("--start-p", start, "initial nonzero mass: a number, max, or record:<i>")
      ->capture_default_str();
  rde->add_option("--pool", pool)->capture_default_str()->check(CLI::PositiveNumber);
  rde->add_option("--iterations", iterations)->capture_default_str();
  rde->add_option("--resamples", resamples, "root samples for the mean")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_common(rde, common);
  rde->callback([&] {
    const DegreeModel model = model_from(model_spec);
    RdeBlock block;
    block.start_p = resolve_start(start, find_records(model));
    block.pool = pool;
    block.iterations = iterations;
    block.seed = common.seed;
    RdeOptions opts;
    opts.iterations = iterations;
    opts.pool = pool;
    opts.seed = common.seed;
    opts.workers = common.workers;
    RdeResult solved = solve_rde(model, block.start_p, opts);
    block.diagnostics = std::move(solved.diagnostics);
    block.root_mean = root_mean(solved.population, model, resamples,
                                derive_seed(common.seed, {tag(StreamTag::kRootMean)}), common.workers);
    std::ostringstream csv;
    csv << "iteration,nonzero_mass,mean\n";
    for (std::size_t i = 0; i < block.diagnostics.mean.size(); ++i) {
      csv << i << ',' << fmt(block.diagnostics.nonzero_mass[i]) << ',' << fmt(block.diagnostics.mean[i])
          << '\n';
    }
    if (!block.diagnostics.warning.empty()) std::cerr << "warning: " << block.diagnostics.warning << '\n';
    emit(common, rde_json(model, block, eval_M(model, block.start_p)), csv.str());
  });

  // spectral
  AtomOptions atom_opts;
  atom_opts.samples = 2'000;
  auto* spectral = app.add_subcommand("spectral", "atom at zero from sampled trees on a (depth, t) grid");
  spectral->add_option("--model", model_spec)->capture_default_str();
  spectral->add_option("--depths", atom_opts.depths, "even truncation depths, increasing")
      ->capture_default_str();
  spectral->add_option("--t", atom_opts.t_values, "values of t, decreasing")->capture_default_str();
  spectral->add_option("--samples", atom_opts.samples)->capture_default_str()->check(CLI::PositiveNumber);
  spectral->add_option("--node-cap", atom_opts.node_cap, "trees larger than this are discarded")
      ->capture_default_str();
  add_common(spectral, common);
  spectral->callback([&] {
    const DegreeModel model = model_from(model_spec);
    SpectralBlock block;
    block.seed = common.seed;
    atom_opts.seed = common.seed;
    atom_opts.workers = common.workers;
    block.atom = atom_at_zero_mc(model, atom_opts);
    std::ostringstream csv;
    csv << "depth,t,estimate,std_error\n";
    for (std::size_t i = 0; i < block.atom.depths.size(); ++i) {
      for (std::size_t j = 0; j < block.atom.t_values.size(); ++j) {
        csv << block.atom.depths[i] << ',' << fmt(block.atom.t_values[j]) << ','
            << fmt(block.atom.estimate[i][j]) << ',' << fmt(block.atom.std_error[i][j]) << '\n';
      }
    }
    emit(common, spectral_json(model, block), csv.str());
  });

  // density
  DensityOptions density_opts;
  double e_min = -5.0, e_max = 5.0;
  std::size_t points = 201;
  auto* density = app.add_subcommand("density", "smoothed spectral density from the tree recursion");
  density->add_option("--model", model_spec)->capture_default_str();
  density->add_option("--eta", density_opts.eta, "imaginary part of the energy")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  density->add_option("--depth", density_opts.depth)->capture_default_str();
  density->add_option("--samples", density_opts.samples)->capture_default_str()->check(CLI::PositiveNumber);
  density->add_option("--emin", e_min)->capture_default_str();
  density->add_option("--emax", e_max)->capture_default_str();
  density->add_option("--points", points)->capture_default_str()->check(CLI::PositiveNumber);
  add_common(density, common);
  density->callback([&] {
    if (!(e_max > e_min)) throw std::invalid_argument("--emax must exceed --emin");
    const DegreeModel model = model_from(model_spec);
    density_opts.seed = common.seed;
    density_opts.workers = common.workers;
    const std::vector<double> energies = linspace(e_min, e_max, points);
    const DensityEstimate est = resolvent_density(model, energies, density_opts);
    std::ostringstream csv;
    csv << "E,density,std_error\n";
    for (std::size_t i = 0; i < est.energies.size(); ++i) {
      csv << fmt(est.energies[i]) << ',' << fmt(est.density[i]) << ',' << fmt(est.std_error[i]) << '\n';
    }
    emit(common, density_json(model, est, density_opts), csv.str());
  });

  // simulate
  PipelineConfig sim;
  sim.run_rde = false;
  sim.run_spectral = false;
  bool no_ks = false;
  auto* simulate = app.add_subcommand("simulate", "exact kernel dimension of sampled graphs");
  simulate->add_option("--model", sim.model, "degree model or er:c=<c>")->capture_default_str();
  simulate->add_option("--n", sim.sizes, "graph sizes")->capture_default_str();
  simulate->add_option("--seeds", sim.seeds, "graphs per size")->capture_default_str();
  simulate->add_option("--ks-rounds", sim.ks_rounds, "compare leaf-removal rounds with theory")
      ->capture_default_str();
  simulate->add_option("--primes", sim.primes)->capture_default_str()->check(CLI::Range(1, 16));
  simulate->add_flag("--no-ks", no_ks, "skip leaf-removal preprocessing");
  add_common(simulate, common);
  simulate->callback([&] {
    sim.seed = common.seed;
    sim.workers = common.workers;
    sim.ks_preprocess = !no_ks;
    const Report report = run_pipeline(sim);
    emit(common, report_to_json(report), simulation_csv(report));
    exit_code = report_exit(report);
  });

  // rank
  std::string edges_path, eigen_path;
  std::size_t rank_primes = 3;
  auto* rank = app.add_subcommand("rank", "exact rank and kernel dimension of an edge list");
  rank->add_option("--edges", edges_path, "edge list, one 'u v' pair per line")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--primes", rank_primes)->capture_default_str()->check(CLI::Range(1, 16));
  rank->add_flag("--no-ks", no_ks, "skip leaf-removal preprocessing");
  rank->add_option("--eigenvalues", eigen_path, "also write the adjacency spectrum as CSV");
  add_common(rank, common);
  rank->callback([&] {
    const Graph g = read_edge_list_file(edges_path);
    const std::vector<std::uint64_t> primes = default_primes(rank_primes);
    RankOptions opts;
    opts.seed = common.seed;
    const KernelDimension kd = kernel_dim_exact(g, primes, !no_ks, common.workers, opts);
    if (!eigen_path.empty()) {
      const SpectrumSummary spec = symmetric_eigenvalues(g);
      std::ostringstream csv;
      csv << "lambda\n" << std::setprecision(17);
      for (double lambda : spec.eigenvalues) csv << lambda << '\n';
      write_file(resolve(eigen_path), csv.str());
    }
    emit(common, rank_json(g, kd), "");
  });

  // pipeline
  PipelineConfig full;
  auto* pipeline = app.add_subcommand("pipeline", "theory, rde, spectral and simulation with verdicts");
  pipeline->add_option("--model", full.model, "degree model or er:c=<c>")->capture_default_str();
  pipeline->add_option("--n", full.sizes)->capture_default_str();
  pipeline->add_option("--seeds", full.seeds)->capture_default_str();
  pipeline->add_option("--ks-rounds", full.ks_rounds)->capture_default_str();
  pipeline->add_option("--primes", full.primes)->capture_default_str()->check(CLI::Range(1, 16));
  pipeline->add_flag("--no-ks", no_ks);
  pipeline->add_option("--pool", full.rde_pool)->capture_default_str()->check(CLI::PositiveNumber);
  pipeline->add_option("--iterations", full.rde_iterations)->capture_default_str();
  pipeline->add_option("--resamples", full.root_resamples)->capture_default_str();
  pipeline->add_option("--depths", full.depths)->capture_default_str();
  pipeline->add_option("--t", full.t_values)->capture_default_str();
  pipeline->add_option("--tree-samples", full.tree_samples)->capture_default_str();
  pipeline->add_flag("!--no-rde", full.run_rde, "skip the population stage");
  pipeline->add_flag("!--no-spectral", full.run_spectral, "skip the tree stage");
  pipeline->add_flag("!--no-simulation", full.run_simulation, "skip graph sampling");
  pipeline->add_option("--tol-simulation", full.tol.simulation)->capture_default_str();
  pipeline->add_option("--tol-rde", full.tol.rde)->capture_default_str();
  pipeline->add_option("--tol-bracket", full.tol.bracket)->capture_default_str();
  pipeline->add_option("--tol-ks", full.tol.ks)->capture_default_str();
  add_common(pipeline, common);
  pipeline->callback([&] {
    full.seed = common.seed;
    full.workers = common.workers;
    full.ks_preprocess = !no_ks;
    const Report report = run_pipeline(full);
    emit(common, report_to_json(report), simulation_csv(report));
    exit_code = report_exit(report);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return exit_code;
}
