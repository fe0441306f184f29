#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nullity {

struct Edge {
  std::uint32_t u;
  std::uint32_t v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph in compressed sparse row form. Neighbor lists are
/// sorted, symmetric and free of self-loops.
class Graph {
 public:
  Graph() = default;
  /// n isolated vertices.
  explicit Graph(std::size_t n);

  /// Throws std::invalid_argument on self-loops, repeated edges or endpoints
  /// outside [0, n).
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return targets_.size() / 2; }
  std::size_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  bool has_edge(std::uint32_t u, std::uint32_t v) const;

  /// Every edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const std::uint32_t> targets() const { return targets_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
};

struct InducedSubgraph {
  Graph graph;
  std::vector<std::uint32_t> vertices;  ///< subgraph vertex i is vertices[i] in the parent
};

/// `vertices` must be strictly increasing.
InducedSubgraph induced_subgraph(const Graph& g, std::span<const std::uint32_t> vertices);

/// Vertex v of g becomes permutation[v].
Graph relabel(const Graph& g, std::span<const std::uint32_t> permutation);

/// Sorted `u v` lines, 0-indexed, preceded by a `# n <count>` line so that
/// isolated vertices survive a round trip.
void write_edge_list(const Graph& g, std::ostream& out);
/// Lines starting with '#' are comments except `# n <count>`. Without that
/// header the vertex count is one more than the largest endpoint. Duplicate
/// edges are merged; self-loops are rejected.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

}  // namespace nullity
