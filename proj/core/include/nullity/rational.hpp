#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nullity/graph.hpp"

namespace nullity {

inline constexpr std::size_t kRationalOracleCap = 200;

/// Exact rank over Q by fraction-free (Bareiss) elimination on big integers.
/// Throws std::length_error above kRationalOracleCap vertices.
std::size_t rational_rank_oracle(const Graph& g);

/// Same for a row-major integer matrix; the cap applies to both dimensions.
std::size_t rational_rank(std::span<const std::int64_t> entries, std::size_t rows,
                          std::size_t cols);

/// Diagonal of the orthogonal projection onto ker A(g), computed exactly
/// over Q from a reduced-row-echelon kernel basis and rounded at the end.
/// Entry v is mu_v({0}) for the spectral measure of A at vertex v.
std::vector<double> kernel_projection_diagonal(const Graph& g);

}  // namespace nullity
