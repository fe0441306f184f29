#include "nullity/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nullity {

CavityFunctions::CavityFunctions(const DegreeModel& model) : model_(model), mean_(model.mean()) {
  if (!(mean_ > 0.0)) throw std::domain_error("degenerate degree model");
}

double CavityFunctions::xbar(double x) const {
  return std::clamp(model_.law().gf(1.0 - x, 1) / mean_, 0.0, 1.0);
}

double CavityFunctions::M(double x) const {
  const double xb = xbar(x);
  const auto& law = model_.law();
  return mean_ * x * xb + law.gf(1.0 - x, 0) + law.gf(1.0 - xb, 0) - 1.0;
}

double CavityFunctions::M_prime(double x) const {
  return model_.law().gf(1.0 - x, 2) * (xbarbar(x) - x);
}

double eval_M(const DegreeModel& model, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("M argument outside [0,1]");
  return CavityFunctions(model).M(x);
}

MCurve m_curve(const DegreeModel& model, std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("M curve needs >= 2 grid points");
  const CavityFunctions f(model);
  MCurve curve;
  curve.points.reserve(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    curve.points.push_back({x, f.M(x), f.xbar(x), f.M_prime(x)});
  }
  return curve;
}

namespace {

double bisect_root(const CavityFunctions& f, double lo, double hi, double g_lo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = f.xbarbar(mid) - mid;
    if (g_mid == 0.0) return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimisation of |xbarbar(x) - x| on [lo, hi].
double minimise_gap(const CavityFunctions& f, double lo, double hi, double tol) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  auto gap = [&](double x) { return std::abs(f.xbarbar(x) - x); };
  double a = lo, b = hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = gap(c), fd = gap(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = gap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = gap(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

RecordSet find_records(const DegreeModel& model, const RecordOptions& options) {
  const CavityFunctions f(model);
  RecordSet out;

  if (model.prob(0) + model.prob(1) >= 1.0 - 1e-15) {
    // Offspring law is a point mass at 0 and xbarbar == 1 everywhere.
    out.degenerate = true;
    const double m1 = f.M(1.0);
    out.fixed_points.push_back({1.0, m1, false});
    out.locations = {1.0};
    out.values = {m1};
    out.first_extremum = 1.0;
    out.first_extremum_value = m1;
    out.global_max = m1;
    out.global_argmax = 1.0;
    return out;
  }

  const std::size_t n = std::max<std::size_t>(options.grid_points, 3);
  std::vector<double> xs(n), gs(n), ms(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    gs[i] = f.xbarbar(xs[i]) - xs[i];
    ms[i] = f.M(xs[i]);
  }
  const double h = 1.0 / static_cast<double>(n - 1);

  auto is_degenerate_root = [&](double x) {
    const double step = 1e-6;
    const double lo = std::max(0.0, x - step), hi = std::min(1.0, x + step);
    const double slope = (f.xbarbar(hi) - hi - (f.xbarbar(lo) - lo)) / (hi - lo);
    return std::abs(slope) < 1e-6;
  };

  std::vector<FixedPoint> fixed;
  for (std::size_t i = 0; i < n; ++i) {
    if (gs[i] == 0.0) {
      fixed.push_back({xs[i], 0.0, is_degenerate_root(xs[i])});
      continue;
    }
    if (i + 1 < n && gs[i + 1] != 0.0 && (gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
      const double root = bisect_root(f, xs[i], xs[i + 1], gs[i], options.x_tolerance);
      fixed.push_back({root, 0.0, is_degenerate_root(root)});
      continue;
    }
    // Touching without a sign change.
    if (i > 0 && i + 1 < n && std::abs(gs[i]) < options.tangential_threshold &&
        std::abs(gs[i]) <= std::abs(gs[i - 1]) && std::abs(gs[i]) <= std::abs(gs[i + 1]) &&
        (gs[i - 1] < 0.0) == (gs[i] < 0.0) && (gs[i + 1] < 0.0) == (gs[i] < 0.0)) {
      const double x = minimise_gap(f, xs[i - 1], xs[i + 1], options.x_tolerance);
      if (std::abs(f.xbarbar(x) - x) < options.tangential_threshold) {
        fixed.push_back({x, 0.0, true});
      }
    }
  }
  std::sort(fixed.begin(), fixed.end(),
            [](const FixedPoint& a, const FixedPoint& b) { return a.x < b.x; });
  for (auto& fp : fixed) fp.M = f.M(fp.x);
  // Merge duplicates produced by neighbouring grid cells.
  std::vector<FixedPoint> merged;
  for (const auto& fp : fixed) {
    if (!merged.empty() && fp.x - merged.back().x < 10.0 * options.x_tolerance + 1e-14) {
      merged.back().tangential = merged.back().tangential || fp.tangential;
      continue;
    }
    merged.push_back(fp);
  }
  out.fixed_points = merged;
  if (merged.empty()) {
    throw std::runtime_error("no fixed point of xbarbar found on the grid");
  }

  double running = -std::numeric_limits<double>::infinity();
  std::size_t grid_cursor = 0;
  for (const auto& fp : merged) {
    // Grid maxima strictly before fp.x, away from its immediate neighbourhood.
    while (grid_cursor < n && xs[grid_cursor] < fp.x - 2.0 * h) {
      running = std::max(running, ms[grid_cursor]);
      ++grid_cursor;
    }
    if (fp.x > 0.0) running = std::max(running, ms[0]);
    if (fp.M > running + options.record_slack) {
      out.locations.push_back(fp.x);
      out.values.push_back(fp.M);
    } else if (std::abs(fp.M - running) <= options.record_slack) {
      out.ambiguous.push_back(fp.x);
    }
    running = std::max(running, fp.M);
  }

  out.first_extremum = merged.front().x;
  out.first_extremum_value = merged.front().M;
  out.global_max = -std::numeric_limits<double>::infinity();
  auto consider = [&](double x, double m) {
    if (m > out.global_max) {
      out.global_max = m;
      out.global_argmax = x;
    }
  };
  consider(0.0, ms.front());
  for (const auto& fp : merged) consider(fp.x, fp.M);
  consider(1.0, ms.back());
  return out;
}

ErdosRenyiQ er_q(double c, std::size_t max_iterations) {
  if (!(c > 0.0)) throw std::invalid_argument("er_q needs c > 0");
  ErdosRenyiQ out;
  auto f = [c](double x) { return std::exp(-c * std::exp(-c * x)); };
  // Iterating from 0 climbs monotonically towards the smallest root, but only
  // algebraically fast near c = e, so finish with a scan and bisection.
  double lo = 0.0;
  for (std::size_t k = 0; k < max_iterations; ++k) {
    const double next = f(lo);
    ++out.iterations;
    if (!(next > lo)) break;
    lo = next;
  }
  constexpr double kStep = 1e-6;
  double hi = lo;
  while (hi < 1.0 && f(hi) - hi > 0.0) {
    lo = hi;
    hi = std::min(1.0, hi + kStep);
  }
  for (int k = 0; k < 200 && hi - lo > 1e-16; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) - mid > 0.0 ? lo : hi) = mid;
  }
  out.converged = f(hi) - hi <= 0.0;
  out.q = hi;
  const double e = std::exp(-c * out.q);
  out.kernel_mass = out.q + e + c * out.q * e - 1.0;
  return out;
}

KSTrajectory ks_trajectory(const DegreeModel& model, std::size_t rounds) {
  if (!(model.mean() > 0.0)) throw std::domain_error("degenerate degree model");
  const auto& law = model.law();
  const double mean = model.mean();
  auto offspring_gf = [&](double x) { return law.gf(x, 1) / mean; };

  KSTrajectory out;
  out.alpha.resize(rounds + 1);
  out.beta.resize(rounds + 1);
  out.p_in_a.resize(rounds + 1);
  out.p_in_b.resize(rounds + 1);
  out.lr.resize(rounds + 1);

  out.alpha[0] = 0.0;
  out.beta[0] = 1.0 - offspring_gf(1.0);
  out.p_in_a[0] = law[0];
  out.p_in_b[0] = 0.0;
  out.lr[0] = out.p_in_a[0];
  for (std::size_t t = 1; t <= rounds; ++t) {
    const double beta_prev = out.beta[t - 1];
    const double alpha = offspring_gf(beta_prev);
    out.alpha[t] = alpha;
    out.beta[t] = 1.0 - offspring_gf(1.0 - alpha);
    const double d1 = law.gf(beta_prev, 1);
    out.p_in_a[t] = law.gf(beta_prev, 0) + (1.0 - beta_prev - alpha) * d1;
    out.p_in_b[t] = 1.0 - law.gf(1.0 - alpha, 0) - alpha * d1;
    out.lr[t] = out.p_in_a[t] - out.p_in_b[t];
  }
  return out;
}

}  // namespace nullity
