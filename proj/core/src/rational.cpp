#include "nullity/rational.hpp"

#include <gmpxx.h>

#include <stdexcept>
#include <utility>

namespace nullity {

namespace {

void check_cap(std::size_t rows, std::size_t cols) {
  if (rows > kRationalOracleCap || cols > kRationalOracleCap) {
    throw std::length_error("rational elimination is limited to 200 rows and columns");
  }
}

std::size_t bareiss_rank(std::vector<mpz_class> a, std::size_t rows, std::size_t cols) {
  std::size_t rank = 0;
  mpz_class previous = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
    }
    const mpz_class& p = a[rank * cols + c];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      mpz_class& lead = a[i * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class& x = a[i * cols + j];
        x = x * p - lead * a[rank * cols + j];
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), previous.get_mpz_t());
      }
      lead = 0;
    }
    previous = p;
    ++rank;
  }
  return rank;
}

std::vector<mpz_class> adjacency(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<mpz_class> a(n * n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t w : g.neighbors(v)) a[v * n + w] = 1;
  }
  return a;
}

// Reduced row echelon form in place; returns the pivot column of each row.
std::vector<std::size_t> rref(std::vector<mpq_class>& a, std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
    }
    const mpq_class inv = 1 / a[rank * cols + c];
    for (std::size_t j = c; j < cols; ++j) a[rank * cols + j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i * cols + c] == 0) continue;
      const mpq_class factor = a[i * cols + c];
      for (std::size_t j = c; j < cols; ++j) a[i * cols + j] -= factor * a[rank * cols + j];
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

}  // namespace

std::size_t rational_rank_oracle(const Graph& g) {
  const std::size_t n = g.num_vertices();
  check_cap(n, n);
  return bareiss_rank(adjacency(g), n, n);
}

std::size_t rational_rank(std::span<const std::int64_t> entries, std::size_t rows,
                          std::size_t cols) {
  check_cap(rows, cols);
  if (entries.size() != rows * cols) throw std::invalid_argument("dense matrix size mismatch");
  std::vector<mpz_class> a;
  a.reserve(entries.size());
  for (std::int64_t v : entries) a.emplace_back(static_cast<long>(v));
  return bareiss_rank(std::move(a), rows, cols);
}

std::vector<double> kernel_projection_diagonal(const Graph& g) {
  const std::size_t n = g.num_vertices();
  check_cap(n, n);
  std::vector<mpq_class> a(n * n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t w : g.neighbors(v)) a[v * n + w] = 1;
  }
  const std::vector<std::size_t> pivots = rref(a, n, n);
  std::vector<std::uint8_t> is_pivot(n, 0);
  for (std::size_t c : pivots) is_pivot[c] = 1;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  const std::size_t k = free_cols.size();
  std::vector<double> out(n, 0.0);
  if (k == 0) return out;

  // Basis vector b for free column f: b_f = 1, b_{pivot(r)} = -R[r][f].
  std::vector<mpq_class> basis(n * k, 0);  // row-major n x k
  for (std::size_t b = 0; b < k; ++b) {
    basis[free_cols[b] * k + b] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      basis[pivots[r] * k + b] = -a[r * n + free_cols[b]];
    }
  }
  // Gram matrix G = B^T B augmented with the identity, inverted by rref.
  std::vector<mpq_class> gram(k * 2 * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      mpq_class s = 0;
      for (std::size_t v = 0; v < n; ++v) s += basis[v * k + i] * basis[v * k + j];
      gram[i * 2 * k + j] = s;
    }
    gram[i * 2 * k + k + i] = 1;
  }
  rref(gram, k, 2 * k);
  // P_vv = b_v^T G^{-1} b_v with b_v the v-th row of the basis.
  for (std::size_t v = 0; v < n; ++v) {
    mpq_class total = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (basis[v * k + i] == 0) continue;
      mpq_class s = 0;
      for (std::size_t j = 0; j < k; ++j) s += gram[i * 2 * k + k + j] * basis[v * k + j];
      total += basis[v * k + i] * s;
    }
    out[v] = total.get_d();
  }
  return out;
}

}  // namespace nullity
