#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nullity/graph.hpp"

namespace nullity {

inline constexpr std::size_t kDenseEigenCap = 4000;

struct SpectrumSummary {
  std::size_t n = 0;
  std::vector<double> eigenvalues;  ///< ascending
  double spectral_radius = 0.0;
  /// 1e-8 * max(1, spectral radius). Only for display: kernel dimensions
  /// come from kernel_dim_exact.
  double kernel_tol = 0.0;
  std::size_t numerical_kernel = 0;  ///< eigenvalues with |lambda| < kernel_tol

  /// Fraction of eigenvalues <= t.
  double cdf(double t) const;
  /// Counts in `bins` equal bins over [lo, hi]; values outside are dropped.
  std::vector<std::size_t> histogram(std::size_t bins, double lo, double hi) const;
  /// max_i |lambda_i + lambda_{n+1-i}|, zero for a bipartite graph.
  double symmetry_defect() const;
};

/// Householder tridiagonalization followed by implicit-shift QL. Throws
/// std::length_error beyond `cap` vertices.
SpectrumSummary symmetric_eigenvalues(const Graph& g, std::size_t cap = kDenseEigenCap);

/// Eigenvalues of a full symmetric row-major n x n matrix, ascending.
std::vector<double> symmetric_eigenvalues_dense(std::vector<double> a, std::size_t n);

/// sup_t |F_a(t) - F_b(t)| for two sorted spectra of equal size, treating
/// eigenvalues closer than `tol` as equal.
double max_cdf_gap(std::span<const double> a, std::span<const double> b, double tol);

struct PerturbationCheck {
  double max_cdf_gap = 0.0;
  std::size_t rank_difference = 0;  ///< rank(A - B)
  double bound = 0.0;               ///< rank_difference / n
  bool holds = true;
};

/// Compares the spectral CDFs of two graphs on the same vertex set with the
/// rank of the difference of their adjacency matrices.
PerturbationCheck cdf_rank_perturbation_check(const Graph& a, const Graph& b,
                                              std::size_t cap = kDenseEigenCap);

}  // namespace nullity
