#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nullity/random.hpp"

namespace nullity {

inline constexpr std::size_t kDefaultDegreeCap = 10'000;
inline constexpr double kPoissonTailMass = 1e-12;

/// A probability mass function on {0, ..., K} stored densely by degree.
///
/// Construction renormalizes; negative entries, an empty support, or a
/// support beyond the cap are rejected with std::invalid_argument.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(std::vector<double> probabilities, std::size_t degree_cap = kDefaultDegreeCap);

  std::span<const double> probabilities() const { return probs_; }
  double operator[](std::size_t k) const { return k < probs_.size() ? probs_[k] : 0.0; }
  std::size_t max_degree() const { return probs_.size() - 1; }
  double mean() const { return mean_; }
  double second_moment() const { return second_moment_; }

  /// Sum_k p_k k(k-1)...(k-order+1) x^(k-order), evaluated by Horner's rule.
  double gf(double x, int order = 0) const;

  /// Nonzero entries, degree -> probability.
  std::map<std::size_t, double> support() const;

  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double second_moment_ = 0.0;
};

/// Degree law F_* of the root of the limiting tree.
class DegreeModel {
 public:
  DegreeModel() = default;
  explicit DegreeModel(Pmf law, std::string label = {});

  const Pmf& law() const { return law_; }
  const std::string& label() const { return label_; }
  double mean() const { return law_.mean(); }
  double second_moment() const { return law_.second_moment(); }
  double prob(std::size_t k) const { return law_[k]; }
  std::size_t max_degree() const { return law_.max_degree(); }

 private:
  Pmf law_;
  std::string label_;
};

/// Size-biased offspring law F, F(k-1) = k F_*(k) / mean.
struct OffspringModel {
  Pmf law;
};

/// Parses `poisson:c=<real>`, `regular:d=<int>`, `mixture:d=<int>` or
/// `pmf:<k1>:<p1>,<k2>:<p2>,...`.
DegreeModel parse_model(std::string_view spec, std::size_t degree_cap = kDefaultDegreeCap);

DegreeModel poisson_model(double c, std::size_t degree_cap = kDefaultDegreeCap);
DegreeModel regular_model(std::size_t d);
/// phi_*(x) = d/(1+d) x^d + 1/(1+d) x^(d^3).
DegreeModel mixture_model(std::size_t d, std::size_t degree_cap = kDefaultDegreeCap);
DegreeModel pmf_model(const std::map<std::size_t, double>& entries,
                      std::size_t degree_cap = kDefaultDegreeCap);

/// Throws std::domain_error("degenerate degree model") when the mean is 0.
OffspringModel size_biased(const DegreeModel& model);

/// phi_* and its first three derivatives; order outside 0..3 is rejected.
double gf_eval(const DegreeModel& model, double x, int order);

struct LogConcavityReport {
  enum class Verdict { kLogConcave, kNotLogConcave, kVacuous };
  Verdict verdict = Verdict::kVacuous;
  std::optional<double> first_violation;
  double worst_second_difference = 0.0;
  std::vector<double> grid;
  std::vector<double> log_phi2;

  bool log_concave() const { return verdict == Verdict::kLogConcave; }
};

inline constexpr std::size_t kLogConcavityGrid = 10'001;

/// Grid check of log-concavity of phi_*'' on [0,1].
LogConcavityReport is_phi2_logconcave(const DegreeModel& model,
                                      std::size_t grid_points = kLogConcavityGrid);

std::string to_json(const DegreeModel& model);
DegreeModel degree_model_from_json(std::string_view json);

}  // namespace nullity
