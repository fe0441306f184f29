#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "nullity/degree_model.hpp"
#include "nullity/graph.hpp"

namespace nullity {

/// G(n, c/n) by geometric skipping over the pairs, O(n + |E|).
Graph gen_erdos_renyi(std::size_t n, double c, std::uint64_t seed);

struct ConfigurationResult {
  Graph graph;
  std::size_t half_edges = 0;
  bool parity_adjusted = false;  ///< the last drawn degree was raised by one
  std::size_t self_loops_erased = 0;
  std::size_t multi_edges_erased = 0;
  std::map<std::size_t, std::size_t> drawn_degree_histogram;
  std::map<std::size_t, std::size_t> realized_degree_histogram;

  /// Matched pairs that did not survive erasure, over all matched pairs.
  double erased_fraction() const;
};

/// Erased configuration model: i.i.d. degrees from F_*, uniform half-edge
/// matching, then self-loops and repeated edges dropped.
ConfigurationResult gen_configuration(std::size_t n, const DegreeModel& model, std::uint64_t seed);

/// A graph ensemble named on the command line: `er:c=<c>` or any degree model
/// spec accepted by parse_model (configuration model).
struct GraphFamily {
  enum class Kind { kErdosRenyi, kConfiguration };
  Kind kind = Kind::kConfiguration;
  double c = 0.0;
  DegreeModel model;  ///< Poisson(c) for Erdos-Renyi
  std::string label;

  Graph generate(std::size_t n, std::uint64_t seed) const;
};

GraphFamily parse_graph_family(std::string_view spec);

}  // namespace nullity
