#include <algorithm>
#include <stdexcept>

#include "nullity/karp_sipser.hpp"
#include "nullity/parallel.hpp"
#include "nullity/rank.hpp"
#include "nullity/rational.hpp"

namespace nullity {

std::string to_string(RankMethod method) {
  switch (method) {
    case RankMethod::kSparseElimination:
      return "sparse-elimination";
    case RankMethod::kDenseElimination:
      return "dense-elimination";
    case RankMethod::kBlackBox:
      return "wiedemann";
  }
  return "unknown";
}

RankComputation rank_mod_p(const Graph& g, std::uint64_t p, const RankOptions& options) {
  RankComputation out;
  out.prime = p;
  const std::size_t n = g.num_vertices();
  if (n == 0) return out;
  const PrimeFieldMatrix m = PrimeFieldMatrix::adjacency(g, p);
  const double nn = static_cast<double>(n);
  // One black-box step costs a matrix-vector product, a dot product and a
  // Berlekamp-Massey update, about 2n steps in all.
  const double blackbox_cost = 2.0 * nn * (static_cast<double>(m.nnz()) + 3.0 * nn);
  const double dense_cost = nn * nn * nn / 3.0;
  std::size_t budget = std::numeric_limits<std::size_t>::max();
  if (options.allow_blackbox) {
    budget = static_cast<std::size_t>(std::max(1e6, std::min(blackbox_cost, dense_cost)));
  }
  std::size_t work = 0;
  if (auto rank = rank_sparse_elimination(m, budget, options.max_fill, &work)) {
    out.rank = *rank;
    out.method = RankMethod::kSparseElimination;
    out.work = work;
    return out;
  }
  if (!options.allow_blackbox || (n <= options.dense_limit && dense_cost <= blackbox_cost)) {
    if (n > options.dense_limit) {
      throw std::length_error("sparse elimination exceeded its fill cap and the matrix is too large for dense elimination");
    }
    out.rank = rank_dense_elimination(m);
    out.method = RankMethod::kDenseElimination;
    out.work = static_cast<std::size_t>(dense_cost);
    return out;
  }
  std::size_t matvecs = 0;
  out.rank = rank_blackbox(g, p, options.seed, &matvecs);
  out.method = RankMethod::kBlackBox;
  out.work = matvecs;
  return out;
}

KernelDimension kernel_dim_exact(const Graph& g, std::span<const std::uint64_t> primes,
                                 bool use_ks_preprocess, unsigned workers,
                                 const RankOptions& options) {
  if (primes.empty()) throw std::invalid_argument("kernel_dim_exact needs at least one prime");
  KernelDimension out;
  KernelCertificate& cert = out.certificate;
  cert.preprocessed = use_ks_preprocess;

  Graph reduced;
  if (use_ks_preprocess) {
    KSResult ks = karp_sipser_queue(g);
    cert.leaf_removal_lr = ks.lr();
    reduced = std::move(ks.core.graph);
  } else {
    reduced = g;
  }
  cert.core_vertices = reduced.num_vertices();
  cert.core_edges = reduced.num_edges();

  cert.ranks.resize(primes.size());
  parallel_for(primes.size(), workers, [&](std::size_t i) {
    const RankComputation rc = rank_mod_p(reduced, primes[i], options);
    cert.ranks[i] = {primes[i], rc.rank, rc.method};
  });
  std::size_t best = 0;
  for (const PrimeRank& pr : cert.ranks) {
    best = std::max(best, pr.rank);
    cert.primes_agree = cert.primes_agree && pr.rank == cert.ranks.front().rank;
  }
  if (!cert.primes_agree) {
    if (reduced.num_vertices() > kRationalOracleCap) {
      std::string detail;
      for (const PrimeRank& pr : cert.ranks) {
        detail += " " + std::to_string(pr.prime) + ":" + std::to_string(pr.rank);
      }
      throw std::runtime_error("ranks disagree across primes on a " +
                               std::to_string(reduced.num_vertices()) + "-vertex core:" + detail);
    }
    cert.rational_checked = true;
    cert.rational_rank = rational_rank_oracle(reduced);
    best = cert.rational_rank;
  }
  out.core_kernel = reduced.num_vertices() - best;
  const std::int64_t dim = cert.leaf_removal_lr + static_cast<std::int64_t>(out.core_kernel);
  if (dim < 0) throw std::logic_error("negative kernel dimension");
  out.dim = static_cast<std::size_t>(dim);
  return out;
}

}  // namespace nullity
