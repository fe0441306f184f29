#include "nullity/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nullity/cavity.hpp"
#include "nullity/parallel.hpp"

namespace nullity {

Population::Population(std::vector<double> samples, std::uint64_t seed)
    : samples_(std::move(samples)), seed_(seed) {
  for (double s : samples_) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("population sample outside [0,1]");
    if (s == 0.0) ++zero_count_;
  }
}

Population Population::bernoulli(double p, std::size_t pool, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli parameter outside [0,1]");
  if (pool == 0) throw std::invalid_argument("population pool must be >= 1");
  const auto ones = static_cast<std::size_t>(std::llround(p * static_cast<double>(pool)));
  std::vector<double> samples(pool, 0.0);
  std::fill(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(std::min(ones, pool)), 1.0);
  return Population(std::move(samples), seed);
}

Population Population::constant(double value, std::size_t pool, std::uint64_t seed) {
  if (pool == 0) throw std::invalid_argument("population pool must be >= 1");
  return Population(std::vector<double>(pool, value), seed);
}

double Population::zero_mass() const {
  return samples_.empty() ? 0.0
                          : static_cast<double>(zero_count_) / static_cast<double>(samples_.size());
}

double Population::mean() const {
  if (samples_.empty()) return 0.0;
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

Population Population::sorted() const {
  Population out = *this;
  std::sort(out.samples_.begin(), out.samples_.end());
  return out;
}

double Population::quantile(double q) const {
  if (samples_.empty()) throw std::logic_error("quantile of an empty population");
  std::vector<double> s = samples_;
  const auto idx = static_cast<std::size_t>(
      std::clamp(q, 0.0, 1.0) * static_cast<double>(s.size() - 1));
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(idx), s.end());
  return s[idx];
}

namespace {

// One draw of Y given the outer and inner laws.
double draw_y(Rng& rng, std::span<const double> pool, const Pmf& outer, const Pmf& inner) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const std::size_t n = outer.sample(rng);
  double inverse_sum = 0.0;
  bool infinite = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t inner_count = inner.sample(rng);
    double s = 0.0;
    for (std::size_t j = 0; j < inner_count; ++j) s += pool[pick(rng)];
    // Keep consuming the stream identically whatever the branch.
    if (s == 0.0) {
      infinite = true;
    } else {
      inverse_sum += 1.0 / s;
    }
  }
  if (infinite) return 0.0;
  return 1.0 / (1.0 + inverse_sum);
}

}  // namespace

Population theta_step(const Population& pop, const Pmf& outer, const Pmf& inner,
                      std::uint64_t seed, std::uint64_t round, unsigned workers) {
  if (pop.size() == 0) throw std::invalid_argument("theta_step on an empty population");
  const std::size_t pool = pop.size();
  std::vector<double> out(pool);
  const std::size_t blocks = (pool + kThetaBlock - 1) / kThetaBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    Rng rng = make_stream(seed, {tag(StreamTag::kTheta), round, b});
    const std::size_t end = std::min(pool, (b + 1) * kThetaBlock);
    for (std::size_t k = b * kThetaBlock; k < end; ++k) {
      out[k] = draw_y(rng, pop.samples(), outer, inner);
    }
  });
  return Population(std::move(out), pop.seed());
}

RdeResult solve_rde(const DegreeModel& model, double start_p, const RdeOptions& options) {
  const OffspringModel offspring = size_biased(model);
  RdeResult result;
  auto& diag = result.diagnostics;
  if (model.prob(0) + model.prob(1) < 1.0) {
    const CavityFunctions f(model);
    diag.start_gap = std::abs(f.xbarbar(start_p) - start_p);
    diag.start_is_fixed_point = diag.start_gap < 1e-8;
    if (!diag.start_is_fixed_point) {
      diag.warning = "start_p is not a fixed point of xbarbar (gap " +
                     std::to_string(diag.start_gap) + ")";
    }
  }
  Population pop = Population::bernoulli(start_p, options.pool, options.seed);
  diag.nonzero_mass.push_back(pop.nonzero_mass());
  diag.mean.push_back(pop.mean());
  for (std::size_t it = 0; it < options.iterations; ++it) {
    pop = theta_step(pop, offspring.law, offspring.law, options.seed, it, options.workers);
    diag.nonzero_mass.push_back(pop.nonzero_mass());
    diag.mean.push_back(pop.mean());
  }
  result.population = std::move(pop);
  return result;
}

Estimate root_mean(const Population& pop, const DegreeModel& model, std::size_t resamples,
                   std::uint64_t seed, unsigned workers) {
  if (resamples < kBatchCount) throw std::invalid_argument("root_mean needs >= 20 resamples");
  if (pop.size() == 0) throw std::invalid_argument("root_mean on an empty population");
  const OffspringModel offspring = size_biased(model);
  std::vector<double> values(resamples);
  const std::size_t blocks = (resamples + kThetaBlock - 1) / kThetaBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    Rng rng = make_stream(seed, {tag(StreamTag::kRootMean), b});
    const std::size_t end = std::min(resamples, (b + 1) * kThetaBlock);
    for (std::size_t k = b * kThetaBlock; k < end; ++k) {
      values[k] = draw_y(rng, pop.samples(), model.law(), offspring.law);
    }
  });
  Estimate est;
  est.samples = resamples;
  est.value = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(resamples);
  std::vector<double> batch_means(kBatchCount);
  for (std::size_t b = 0; b < kBatchCount; ++b) {
    const std::size_t lo = b * resamples / kBatchCount;
    const std::size_t hi = (b + 1) * resamples / kBatchCount;
    batch_means[b] = std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(lo),
                                     values.begin() + static_cast<std::ptrdiff_t>(hi), 0.0) /
                     static_cast<double>(hi - lo);
  }
  const double bm = std::accumulate(batch_means.begin(), batch_means.end(), 0.0) /
                    static_cast<double>(kBatchCount);
  double var = 0.0;
  for (double m : batch_means) var += (m - bm) * (m - bm);
  var /= static_cast<double>(kBatchCount - 1);
  est.std_error = std::sqrt(var / static_cast<double>(kBatchCount));
  return est;
}

}  // namespace nullity
