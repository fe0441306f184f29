#include "nullity/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <lapacke.h>

#include "nullity/rank.hpp"
#include "nullity/rational.hpp"

namespace nullity {

namespace {

std::vector<double> dense_adjacency(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<double> a(n * n, 0.0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t w : g.neighbors(v)) a[v * n + w] = 1.0;
  }
  return a;
}

}  // namespace

std::vector<double> symmetric_eigenvalues_dense(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("matrix size mismatch");
  std::vector<double> w(n);
  if (n == 0) return w;
  const auto dim = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', dim, a.data(), dim, w.data());
  if (info != 0) throw std::runtime_error("dsyev failed with info " + std::to_string(info));
  return w;  // ascending
}

SpectrumSummary symmetric_eigenvalues(const Graph& g, std::size_t cap) {
  const std::size_t n = g.num_vertices();
  if (n > cap) throw std::length_error("graph exceeds the dense eigensolver cap");
  SpectrumSummary out;
  out.n = n;
  out.eigenvalues = symmetric_eigenvalues_dense(dense_adjacency(g), n);
  for (double x : out.eigenvalues) out.spectral_radius = std::max(out.spectral_radius, std::abs(x));
  out.kernel_tol = 1e-8 * std::max(1.0, out.spectral_radius);
  for (double x : out.eigenvalues) {
    if (std::abs(x) < out.kernel_tol) ++out.numerical_kernel;
  }
  return out;
}

double SpectrumSummary::cdf(double t) const {
  if (eigenvalues.empty()) return 0.0;
  const auto count = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), t) - eigenvalues.begin();
  return static_cast<double>(count) / static_cast<double>(eigenvalues.size());
}

std::vector<std::size_t> SpectrumSummary::histogram(std::size_t bins, double lo, double hi) const {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("bad histogram range");
  std::vector<std::size_t> counts(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : eigenvalues) {
    if (x < lo || x > hi) continue;
    const auto b = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
    ++counts[b];
  }
  return counts;
}

double SpectrumSummary::symmetry_defect() const {
  double worst = 0.0;
  const std::size_t m = eigenvalues.size();
  for (std::size_t i = 0; i < m; ++i) {
    worst = std::max(worst, std::abs(eigenvalues[i] + eigenvalues[m - 1 - i]));
  }
  return worst;
}

double max_cdf_gap(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) throw std::invalid_argument("spectra of different sizes");
  if (a.empty()) return 0.0;
  std::size_t worst = 0;
  auto check = [&](double t) {
    const auto ca = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), t) - a.begin());
    const auto cb = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t) - b.begin());
    worst = std::max(worst, ca > cb ? ca - cb : cb - ca);
  };
  for (double x : a) check(x + tol);
  for (double x : b) check(x + tol);
  return static_cast<double>(worst) / static_cast<double>(a.size());
}

PerturbationCheck cdf_rank_perturbation_check(const Graph& a, const Graph& b, std::size_t cap) {
  const std::size_t n = a.num_vertices();
  if (b.num_vertices() != n) throw std::invalid_argument("graphs must share the vertex set");
  const SpectrumSummary sa = symmetric_eigenvalues(a, cap);
  const SpectrumSummary sb = symmetric_eigenvalues(b, cap);
  PerturbationCheck out;
  if (n == 0) return out;
  const double tol = 1e-8 * std::max({1.0, sa.spectral_radius, sb.spectral_radius});
  out.max_cdf_gap = max_cdf_gap(sa.eigenvalues, sb.eigenvalues, tol);

  std::vector<std::int64_t> diff(n * n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t w : a.neighbors(v)) diff[v * n + w] += 1;
    for (std::uint32_t w : b.neighbors(v)) diff[v * n + w] -= 1;
  }
  if (n <= kRationalOracleCap) {
    out.rank_difference = rational_rank(diff, n, n);
  } else {
    for (std::uint64_t p : default_primes()) {
      out.rank_difference =
          std::max(out.rank_difference, rank_mod_p(PrimeFieldMatrix::from_dense(diff, n, n, p)));
    }
  }
  out.bound = static_cast<double>(out.rank_difference) / static_cast<double>(n);
  out.holds = out.max_cdf_gap <= out.bound + 1e-12;
  return out;
}

}  // namespace nullity
