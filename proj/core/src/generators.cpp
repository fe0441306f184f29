#include "nullity/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nullity {

Graph gen_erdos_renyi(std::size_t n, double c, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("Erdos-Renyi graph needs n >= 1");
  if (n == 1) return Graph(1);
  const double p = c / static_cast<double>(n);
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Erdos-Renyi graph needs 0 < c < n");
  Rng rng = make_stream(seed, {tag(StreamTag::kGraph), 0});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_q = std::log1p(-p);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(c * static_cast<double>(n) / 2.0 * 1.1) + 16);
  // Walk the pairs (v, w), w < v, in row order, jumping over geometric gaps.
  std::int64_t v = 1, w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = unit(rng);
    const double skip = std::floor(std::log1p(-r) / log_q);
    w += 1 + static_cast<std::int64_t>(std::min(skip, 4.0e18));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.push_back({static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(v)});
  }
  return Graph::from_edges(n, edges);
}

double ConfigurationResult::erased_fraction() const {
  const std::size_t pairs = half_edges / 2;
  return pairs == 0 ? 0.0
                    : static_cast<double>(self_loops_erased + multi_edges_erased) /
                          static_cast<double>(pairs);
}

ConfigurationResult gen_configuration(std::size_t n, const DegreeModel& model,
                                      std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("configuration model needs n >= 1");
  Rng rng = make_stream(seed, {tag(StreamTag::kGraph), 1});
  ConfigurationResult out;
  std::vector<std::size_t> degree(n);
  std::size_t total = 0;
  for (auto& d : degree) {
    d = model.law().sample(rng);
    total += d;
  }
  if (total % 2 == 1) {
    ++degree.back();
    ++total;
    out.parity_adjusted = true;
  }
  for (std::size_t d : degree) ++out.drawn_degree_histogram[d];
  out.half_edges = total;

  std::vector<std::uint32_t> stubs;
  stubs.reserve(total);
  for (std::size_t v = 0; v < n; ++v) stubs.insert(stubs.end(), degree[v], static_cast<std::uint32_t>(v));
  std::shuffle(stubs.begin(), stubs.end(), rng);

  std::vector<Edge> edges;
  edges.reserve(total / 2);
  for (std::size_t i = 0; i + 1 < total; i += 2) {
    const std::uint32_t a = stubs[i], b = stubs[i + 1];
    if (a == b) {
      ++out.self_loops_erased;
      continue;
    }
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  out.multi_edges_erased = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  out.graph = Graph::from_edges(n, edges);
  for (std::uint32_t v = 0; v < n; ++v) ++out.realized_degree_histogram[out.graph.degree(v)];
  return out;
}

Graph GraphFamily::generate(std::size_t n, std::uint64_t seed) const {
  if (kind == Kind::kErdosRenyi) return gen_erdos_renyi(n, c, seed);
  return gen_configuration(n, model, seed).graph;
}

GraphFamily parse_graph_family(std::string_view spec) {
  GraphFamily family;
  family.label = std::string(spec);
  if (spec.starts_with("er:")) {
    const std::string_view rest = spec.substr(3);
    if (!rest.starts_with("c=")) throw std::invalid_argument("expected er:c=<mean degree>");
    std::size_t used = 0;
    const std::string value(rest.substr(2));
    double c = 0.0;
    try {
      c = std::stod(value, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad mean degree in '" + family.label + "'");
    }
    if (used != value.size() || !(c > 0.0)) {
      throw std::invalid_argument("bad mean degree in '" + family.label + "'");
    }
    family.kind = GraphFamily::Kind::kErdosRenyi;
    family.c = c;
    family.model = DegreeModel(poisson_model(c).law(), "poisson:c=" + value);
    return family;
  }
  family.kind = GraphFamily::Kind::kConfiguration;
  family.model = parse_model(spec);
  family.c = family.model.mean();
  return family;
}

}  // namespace nullity
