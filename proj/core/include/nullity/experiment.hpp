#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nullity/cavity.hpp"
#include "nullity/degree_model.hpp"
#include "nullity/generators.hpp"
#include "nullity/karp_sipser.hpp"
#include "nullity/population.hpp"
#include "nullity/rank.hpp"
#include "nullity/tree.hpp"

namespace nullity {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kReportSchema = "nullity.report/1";

/// Every comparison made by the pipeline reads its tolerance from here.
struct Tolerances {
  double simulation = 0.005;  ///< simulated kernel fraction vs max M
  double rde = 0.003;         ///< population root mean vs max M
  double bracket = 0.01;      ///< slack on [M(x_0), max M]
  double ks = 0.01;           ///< leaf-removal marginals vs trajectory
  double cdf = 0.02;          ///< smoothed spectral CDF gap
  double record = 1e-9;       ///< M(x_0) == max M for a point prediction
};

struct PipelineConfig {
  std::string model = "poisson:c=1";  ///< degree model spec or er:c=<c>
  std::vector<std::size_t> sizes{10'000};
  std::size_t seeds = 10;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t primes = 3;
  bool ks_preprocess = true;

  bool run_rde = true;
  bool run_spectral = true;
  bool run_simulation = true;
  /// Leaf-removal rounds compared with the limiting trajectory; 0 skips it.
  /// Uses the largest size and the same number of seeds.
  std::size_t ks_rounds = 0;

  std::size_t rde_pool = 100'000;
  std::size_t rde_iterations = 300;
  std::size_t root_resamples = 100'000;
  std::vector<std::size_t> depths{8, 12, 16};
  std::vector<double> t_values{1e-1, 1e-2, 1e-3};
  std::size_t tree_samples = 2'000;
  std::size_t node_cap = kDefaultNodeCap;

  Tolerances tol;
};

struct TheoryBlock {
  RecordSet records;
  LogConcavityReport::Verdict log_concavity = LogConcavityReport::Verdict::kVacuous;
  std::optional<ErdosRenyiQ> erdos_renyi;
  bool point_prediction = false;  ///< M(x_0) == max M within tol.record
};

struct RdeBlock {
  double start_p = 0.0;
  std::size_t pool = 0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  RdeDiagnostics diagnostics;
  Estimate root_mean;
};

struct SpectralBlock {
  std::uint64_t seed = 0;
  AtomGridEstimate atom;
};

struct LeafRemovalBlock {
  KSMarginals empirical;
  KSTrajectory theory;
  double max_lr_gap = 0.0;
};

struct SimulationRun {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t edges = 0;
  double kernel_fraction = 0.0;
  double lr_fraction = 0.0;
  double core_fraction = 0.0;
  double core_kernel_fraction = 0.0;
  bool primes_agree = true;
  std::vector<PrimeRank> ranks;
};

struct Verdict {
  std::string name;
  std::string kind;  ///< "point", "bracket", "upper" or "soft"
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  bool fatal = true;  ///< soft checks are logged but never fail a run
  std::string detail;
};

struct Report {
  PipelineConfig config;
  std::optional<TheoryBlock> theory;
  std::optional<RdeBlock> rde;
  std::optional<SpectralBlock> spectral;
  std::vector<SimulationRun> simulation;
  std::optional<LeafRemovalBlock> leaf_removal;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;

  bool passed() const;
};

/// Failure inside one pipeline stage; what() names the stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

TheoryBlock run_theory(const DegreeModel& model, const Tolerances& tol = {});

/// theory -> rde -> spectral -> simulation, then the verdicts.
Report run_pipeline(const PipelineConfig& config);

/// Versioned JSON; identical inputs give byte-identical output.
std::string report_to_json(const Report& report);

// JSON documents for the single-stage commands, same schema family.
std::string theory_json(const DegreeModel& model, const TheoryBlock& theory,
                        const KSTrajectory& trajectory);
std::string rde_json(const DegreeModel& model, const RdeBlock& rde, double theory_value);
std::string spectral_json(const DegreeModel& model, const SpectralBlock& spectral);
std::string density_json(const DegreeModel& model, const DensityEstimate& density,
                         const DensityOptions& options);
std::string rank_json(const Graph& g, const KernelDimension& kernel);
/// One row per simulated graph, no metadata.
std::string simulation_csv(const Report& report);

/// Columns x, M, xbar, Mprime on `grid` equally spaced points.
void emit_m_curve(const DegreeModel& model, std::size_t grid, std::ostream& out);
void emit_m_curve(const DegreeModel& model, std::size_t grid, const std::string& path);

std::string to_string(LogConcavityReport::Verdict verdict);

}  // namespace nullity
