#include "nullity/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nullity {

Graph::Graph(std::size_t n) : offsets_(n + 1, 0) {
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("graph has too many vertices");
  }
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g(n);
  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop in edge list");
    ++degree[e.u];
    ++degree[e.v];
  }
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.targets_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.targets_[cursor[e.u]++] = e.v;
    g.targets_[cursor[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) {
      throw std::invalid_argument("repeated edge in edge list");
    }
  }
  return g;
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::uint32_t u = 0; u < num_vertices(); ++u) {
    for (std::uint32_t v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

InducedSubgraph induced_subgraph(const Graph& g, std::span<const std::uint32_t> vertices) {
  constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= g.num_vertices()) throw std::out_of_range("vertex out of range");
    if (i > 0 && vertices[i] <= vertices[i - 1]) {
      throw std::invalid_argument("induced subgraph vertices must be strictly increasing");
    }
    index[vertices[i]] = static_cast<std::uint32_t>(i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::uint32_t w : g.neighbors(vertices[i])) {
      const std::uint32_t j = index[w];
      if (j != kAbsent && i < j) edges.push_back({static_cast<std::uint32_t>(i), j});
    }
  }
  return {Graph::from_edges(vertices.size(), edges),
          std::vector<std::uint32_t>(vertices.begin(), vertices.end())};
}

Graph relabel(const Graph& g, std::span<const std::uint32_t> permutation) {
  if (permutation.size() != g.num_vertices()) {
    throw std::invalid_argument("permutation size does not match the graph");
  }
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) e = {permutation[e.u], permutation[e.v]};
  return Graph::from_edges(g.num_vertices(), edges);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# n " << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared = 0;
  bool has_header = false;
  std::uint64_t largest = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    std::istringstream fields(line.substr(start));
    if (line[start] == '#') {
      std::string hash, key;
      std::size_t count = 0;
      if (fields >> hash >> key >> count && key == "n") {
        declared = count;
        has_header = true;
      }
      continue;
    }
    std::uint64_t u = 0, v = 0;
    if (!(fields >> u >> v)) {
      throw std::runtime_error("malformed edge on line " + std::to_string(line_no));
    }
    if (u > std::numeric_limits<std::uint32_t>::max() ||
        v > std::numeric_limits<std::uint32_t>::max()) {
      throw std::runtime_error("vertex id too large on line " + std::to_string(line_no));
    }
    if (u == v) throw std::runtime_error("self-loop on line " + std::to_string(line_no));
    largest = std::max({largest, u, v});
    edges.push_back({static_cast<std::uint32_t>(std::min(u, v)),
                     static_cast<std::uint32_t>(std::max(u, v))});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::size_t n = edges.empty() ? 0 : static_cast<std::size_t>(largest) + 1;
  if (has_header) {
    if (declared < n) throw std::runtime_error("edge endpoint exceeds declared vertex count");
    n = declared;
  }
  return Graph::from_edges(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path);
  return read_edge_list(in);
}

}  // namespace nullity
