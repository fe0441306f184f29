#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nullity/degree_model.hpp"
#include "nullity/population.hpp"

namespace nullity {

class Graph;

/// A rooted tree stored as an arena in breadth-first order. Node 0 is the
/// root and the children of every node occupy a contiguous index range.
struct TreeSample {
  std::vector<std::uint32_t> parent;       ///< parent[0] == 0
  std::vector<std::uint32_t> first_child;  ///< valid when child_count > 0
  std::vector<std::uint32_t> child_count;
  std::vector<std::uint32_t> depth;
  std::size_t truncation_depth = 0;
  bool valid = true;  ///< false when the node cap was hit

  std::size_t size() const { return parent.size(); }
  std::size_t height() const;
};

inline constexpr std::size_t kDefaultNodeCap = 10'000'000;

/// Galton-Watson tree: root offspring ~ F_*, all other offspring ~ F, grown
/// to `depth` generations. Exceeding node_cap returns an invalid sample.
TreeSample sample_gwt(const DegreeModel& model, std::size_t depth, Rng& rng,
                      std::size_t node_cap = kDefaultNodeCap);
TreeSample sample_gwt(const DegreeModel& model, const OffspringModel& offspring,
                      std::size_t depth, Rng& rng, std::size_t node_cap = kDefaultNodeCap);

/// BFS arena of the connected component of `root` in an acyclic graph. The
/// truncation depth is the height rounded up to an even number, so nothing
/// is cut off. Throws if the component contains a cycle.
TreeSample tree_from_graph(const Graph& g, std::uint32_t root);

/// h(t) = -i t m(i t) at the root, by the grandchildren recursion
///   h_i = (1 + sum_{j in D(i)} (t^2 + sum_{k in D(j)} h_k)^{-1})^{-1}
/// with h = 1 on nodes at depth `depth`. `depth` must be even and defaults
/// to the tree's truncation depth.
double h_recursion(const TreeSample& tree, double t);
double h_recursion(const TreeSample& tree, double t, std::size_t depth);

/// Nonnegative extended real used by the exact atom recursion.
class ExtendedReal {
 public:
  enum class Kind { kZero, kFinite, kInfinite };

  static ExtendedReal zero() { return ExtendedReal(Kind::kZero, 0.0); }
  static ExtendedReal infinity() { return ExtendedReal(Kind::kInfinite, 0.0); }
  static ExtendedReal finite(double v);

  Kind kind() const { return kind_; }
  double value() const;  ///< throws for infinity

  ExtendedReal reciprocal() const;
  ExtendedReal operator+(const ExtendedReal& other) const;

 private:
  ExtendedReal(Kind kind, double v) : kind_(kind), value_(v) {}
  Kind kind_;
  double value_;
};

/// mu_T({0}) of a finite tree, leaves up, with 1/0 = inf and 1/inf = 0.
double exact_atom_finite_tree(const TreeSample& tree);

struct AtomGridEstimate {
  std::vector<std::size_t> depths;
  std::vector<double> t_values;
  /// estimate[d][k] = mean of h over valid trees at depths[d], t_values[k].
  std::vector<std::vector<double>> estimate;
  std::vector<std::vector<double>> std_error;
  std::size_t samples = 0;
  std::size_t discarded = 0;
  /// Per tree, h never increased as t decreased or as depth grew.
  bool monotone_in_t = true;
  bool monotone_in_depth = true;

  double headline() const { return estimate.back().back(); }
  double headline_error() const { return std_error.back().back(); }
};

struct AtomOptions {
  std::vector<std::size_t> depths{8, 12, 16};
  std::vector<double> t_values{1e-1, 1e-2, 1e-3};
  std::size_t samples = 10'000;
  std::uint64_t seed = 1;
  std::size_t node_cap = kDefaultNodeCap;
  unsigned workers = 1;
};

AtomGridEstimate atom_at_zero_mc(const DegreeModel& model, const AtomOptions& options);

/// m_i(z) for every node i, leaves up, m = -1/z at the truncation depth.
std::vector<std::complex<double>> resolvent_all(const TreeSample& tree, std::complex<double> z);
std::complex<double> resolvent_root(const TreeSample& tree, std::complex<double> z);

/// Im m_root(E + i eta) / pi for every E in `energies`, one tree.
void accumulate_root_density(const TreeSample& tree, std::span<const double> energies, double eta,
                             std::span<double> out);

struct DensityEstimate {
  std::vector<double> energies;
  std::vector<double> density;
  std::vector<double> std_error;
  double eta = 0.0;
  std::size_t samples = 0;
  std::size_t discarded = 0;
};

struct DensityOptions {
  double eta = 0.05;
  std::size_t depth = 12;
  std::size_t samples = 10'000;
  std::uint64_t seed = 1;
  std::size_t node_cap = kDefaultNodeCap;
  unsigned workers = 1;
};

/// Monte Carlo mean of Im m_root(E + i eta)/pi over sampled trees.
DensityEstimate resolvent_density(const DegreeModel& model, std::span<const double> energies,
                                  const DensityOptions& options);

}  // namespace nullity
