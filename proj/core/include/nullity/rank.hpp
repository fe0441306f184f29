#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nullity/graph.hpp"
#include "nullity/prime_field.hpp"

namespace nullity {

struct SparseEntry {
  std::uint32_t col;
  std::uint64_t value;  ///< canonical residue in [0, p)
};

/// Sparse matrix over GF(p), stored by rows with columns increasing.
class PrimeFieldMatrix {
 public:
  PrimeFieldMatrix(std::size_t rows, std::size_t cols, std::uint64_t p);

  /// Adjacency matrix of g; symmetric by construction.
  static PrimeFieldMatrix adjacency(const Graph& g, std::uint64_t p);
  /// Row-major integer matrix reduced mod p.
  static PrimeFieldMatrix from_dense(std::span<const std::int64_t> entries, std::size_t rows,
                                     std::size_t cols, std::uint64_t p);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  std::uint64_t prime() const { return p_; }
  std::size_t nnz() const;
  std::span<const SparseEntry> row(std::size_t i) const { return rows_[i]; }
  /// Replaces row i; entries are sorted and zeros dropped.
  void set_row(std::size_t i, std::vector<SparseEntry> entries);

 private:
  std::vector<std::vector<SparseEntry>> rows_;
  std::size_t cols_;
  std::uint64_t p_;
};

enum class RankMethod { kSparseElimination, kDenseElimination, kBlackBox };

std::string to_string(RankMethod method);

struct RankComputation {
  std::size_t rank = 0;
  RankMethod method = RankMethod::kSparseElimination;
  std::uint64_t prime = 0;
  /// Elimination entry updates, or matrix-vector products for the black box.
  std::size_t work = 0;
};

struct RankOptions {
  /// Allow the Wiedemann fallback. Its rank is a lower bound that is exact
  /// with high probability; elimination ranks are exact over GF(p).
  bool allow_blackbox = true;
  std::size_t dense_limit = 4096;
  /// Live entries beyond which sparse elimination gives up.
  std::size_t max_fill = 20'000'000;
  std::uint64_t seed = 0x6b65726e656c;
};

/// Markowitz elimination: pivot minimizing (r-1)(c-1) among a few rows and
/// columns of lowest count, ties to the lowest column then row. Returns
/// nullopt once `budget` entry updates or the fill cap are exceeded.
std::optional<std::size_t> rank_sparse_elimination(const PrimeFieldMatrix& m,
                                                   std::size_t budget = std::numeric_limits<std::size_t>::max(),
                                                   std::size_t max_fill = std::numeric_limits<std::size_t>::max(),
                                                   std::size_t* work = nullptr);

std::size_t rank_dense_elimination(const PrimeFieldMatrix& m);

/// Wiedemann rank of the adjacency matrix of g: Berlekamp-Massey on
/// u^T (D A)^i v with random diagonal D and random u, v.
std::size_t rank_blackbox(const Graph& g, std::uint64_t p, std::uint64_t seed,
                          std::size_t* matvecs = nullptr);

/// Rank of the adjacency matrix over GF(p). Sparse elimination runs first
/// under a work budget equal to the estimated black-box cost; past it the
/// dense or black-box path takes over, whichever is cheaper.
RankComputation rank_mod_p(const Graph& g, std::uint64_t p, const RankOptions& options = {});

/// Rank of a general matrix: sparse elimination, dense past the fill cap.
std::size_t rank_mod_p(const PrimeFieldMatrix& m);

struct PrimeRank {
  std::uint64_t prime;
  std::size_t rank;
  RankMethod method;
};

struct KernelCertificate {
  bool preprocessed = false;
  std::int64_t leaf_removal_lr = 0;  ///< LR at the end of leaf removal, 0 without it
  std::size_t core_vertices = 0;     ///< size of the matrix handed to the rank solver
  std::size_t core_edges = 0;
  std::vector<PrimeRank> ranks;
  bool primes_agree = true;
  bool rational_checked = false;
  std::size_t rational_rank = 0;
};

struct KernelDimension {
  std::size_t dim = 0;
  std::size_t core_kernel = 0;  ///< dim ker of the core (the whole graph without preprocessing)
  KernelCertificate certificate;
};

/// dim ker A(g) = LR + |core| - rank(core), using the maximum rank over the
/// primes. When the primes disagree, graphs of at most 200 core vertices are
/// settled by exact rational elimination; larger ones throw.
KernelDimension kernel_dim_exact(const Graph& g, std::span<const std::uint64_t> primes,
                                 bool use_ks_preprocess = true, unsigned workers = 1,
                                 const RankOptions& options = {});

}  // namespace nullity
