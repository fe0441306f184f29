#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nullity/degree_model.hpp"
#include "nullity/generators.hpp"
#include "nullity/graph.hpp"

namespace nullity {

enum class LeafLabel : std::uint8_t { kCore, kA, kB, kP };

/// Outcome of leaf removal. Round t turns G_t into G_{t+1}: leaves of G_t
/// whose neighbor is not a leaf go to A, those neighbors (W_t) go to B,
/// adjacent leaf pairs go to P. A_0 holds the isolated vertices of G, and a
/// vertex left isolated in G_t for t >= 1 joins A_{t+1}.
struct KSResult {
  std::vector<std::uint32_t> a_set;  ///< sorted
  std::vector<std::uint32_t> b_set;
  std::vector<std::uint32_t> p_set;
  std::vector<LeafLabel> label;      ///< per vertex
  std::vector<std::uint32_t> entered;  ///< round index t of the set X_t it first joined
  /// lr_trace[t] = |A_t| - |B_t| for t = 0..rounds.
  std::vector<std::int64_t> lr_trace;
  std::size_t rounds = 0;  ///< t*, the first round with no leaf and no isolated vertex
  InducedSubgraph core;

  std::int64_t lr() const { return lr_trace.empty() ? 0 : lr_trace.back(); }
};

/// Round-synchronous leaf removal.
KSResult karp_sipser(const Graph& g);

/// Event-driven leaf removal: same final A, B, P and core as karp_sipser,
/// without per-round bookkeeping (lr_trace holds only the final value and
/// `entered` is left empty).
KSResult karp_sipser_queue(const Graph& g);

struct KSMarginals {
  std::string family;
  std::size_t n = 0;
  std::size_t seeds = 0;
  /// Index t = 0..rounds; fraction of vertices in A_t / B_t, averaged over seeds.
  std::vector<double> p_in_a;
  std::vector<double> p_in_b;
  std::vector<double> lr;
  std::vector<double> lr_std_error;
};

/// Empirical round marginals on `seeds` independent graphs of size n. Every
/// vertex is an exchangeable root, so each graph contributes the fraction of
/// its vertices in A_t and B_t rather than a single indicator.
KSMarginals ks_round_marginals(const GraphFamily& family, std::size_t rounds, std::size_t n,
                               std::size_t seeds, std::uint64_t seed, unsigned workers = 1);

}  // namespace nullity
