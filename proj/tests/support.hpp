#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "nullity/graph.hpp"
#include "nullity/random.hpp"

namespace nullity::testing {

inline Graph graph_of(std::size_t n, std::initializer_list<Edge> edges) {
  std::vector<Edge> list(edges);
  return Graph::from_edges(n, list);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  edges.push_back({0, static_cast<std::uint32_t>(n - 1)});
  return Graph::from_edges(n, edges);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return Graph::from_edges(leaves + 1, edges);
}

/// Uniform labelled tree on n >= 2 vertices via a random Pruefer sequence.
inline Graph random_tree(std::size_t n, Rng& rng) {
  if (n == 1) return Graph(1);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  std::vector<std::uint32_t> code(n - 2);
  for (auto& c : code) c = pick(rng);
  std::vector<std::uint32_t> degree(n, 1);
  for (auto c : code) ++degree[c];
  std::vector<Edge> edges;
  for (auto c : code) {
    std::uint32_t leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.push_back({std::min(leaf, c), std::max(leaf, c)});
    --degree[leaf];
    --degree[c];
  }
  std::uint32_t a = 0;
  while (degree[a] != 1) ++a;
  std::uint32_t b = a + 1;
  while (degree[b] != 1) ++b;
  edges.push_back({a, b});
  std::sort(edges.begin(), edges.end());
  return Graph::from_edges(n, edges);
}

/// G(n, p) by direct coin flips; independent of the library generators.
inline Graph random_gnp(std::size_t n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, edges);
}

inline std::vector<std::uint32_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace nullity::testing
