#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nullity/degree_model.hpp"

namespace nullity {

/// Empirical approximation of a law on [0,1] with an exactly tracked atom at 0.
class Population {
 public:
  Population() = default;
  explicit Population(std::vector<double> samples, std::uint64_t seed = 0);

  /// round(p * pool) samples at 1.0, the rest at exactly 0.0.
  static Population bernoulli(double p, std::size_t pool, std::uint64_t seed = 0);
  static Population constant(double value, std::size_t pool, std::uint64_t seed = 0);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  std::size_t zero_count() const { return zero_count_; }
  double zero_mass() const;
  double nonzero_mass() const { return 1.0 - zero_mass(); }
  double mean() const;
  std::uint64_t seed() const { return seed_; }

  /// Sorted copy; sorting preserves the law and lets two populations be coupled.
  Population sorted() const;
  /// Empirical quantile, q in [0,1].
  double quantile(double q) const;

 private:
  std::vector<double> samples_;
  std::size_t zero_count_ = 0;
  std::uint64_t seed_ = 0;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// One application of the operator
///   Y = 1 / (1 + sum_{i<=N} (sum_{j<=N'_i} X_ij)^{-1}),  N ~ outer, N'_i ~ inner,
/// with X_ij resampled uniformly from `pop`. An empty inner sum gives Y = 0
/// exactly; N = 0 gives Y = 1. Output index k draws from the stream
/// (seed, round, k / block), so results do not depend on `workers`.
Population theta_step(const Population& pop, const Pmf& outer, const Pmf& inner,
                      std::uint64_t seed, std::uint64_t round, unsigned workers = 1);

struct RdeDiagnostics {
  std::vector<double> nonzero_mass;  ///< entry 0 is the initial population
  std::vector<double> mean;
  bool start_is_fixed_point = true;
  double start_gap = 0.0;  ///< |xbarbar(start_p) - start_p|
  std::string warning;
};

struct RdeResult {
  Population population;
  RdeDiagnostics diagnostics;
};

struct RdeOptions {
  std::size_t iterations = 300;
  std::size_t pool = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Monotone iteration of Theta_{F,F} from Bernoulli(start_p).
RdeResult solve_rde(const DegreeModel& model, double start_p, const RdeOptions& options = {});

/// Mean of Theta_{F_*,F}(pop) by Monte Carlo, standard error from 20 batch means.
Estimate root_mean(const Population& pop, const DegreeModel& model, std::size_t resamples,
                   std::uint64_t seed, unsigned workers = 1);

inline constexpr std::size_t kThetaBlock = 1024;
inline constexpr std::size_t kBatchCount = 20;

}  // namespace nullity
