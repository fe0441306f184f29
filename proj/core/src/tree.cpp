#include "nullity/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nullity/graph.hpp"
#include "nullity/parallel.hpp"

namespace nullity {

std::size_t TreeSample::height() const {
  return depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
}

namespace {

void push_node(TreeSample& tree, std::uint32_t parent, std::uint32_t depth) {
  tree.parent.push_back(parent);
  tree.first_child.push_back(0);
  tree.child_count.push_back(0);
  tree.depth.push_back(depth);
}

}  // namespace

TreeSample sample_gwt(const DegreeModel& model, const OffspringModel& offspring, std::size_t depth,
                      Rng& rng, std::size_t node_cap) {
  TreeSample tree;
  tree.truncation_depth = depth;
  push_node(tree, 0, 0);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (tree.depth[i] >= depth) continue;
    const std::size_t k = i == 0 ? model.law().sample(rng) : offspring.law.sample(rng);
    if (tree.size() + k > node_cap) {
      tree.valid = false;
      return tree;
    }
    tree.first_child[i] = static_cast<std::uint32_t>(tree.size());
    tree.child_count[i] = static_cast<std::uint32_t>(k);
    for (std::size_t c = 0; c < k; ++c) {
      push_node(tree, static_cast<std::uint32_t>(i), tree.depth[i] + 1);
    }
  }
  return tree;
}

TreeSample sample_gwt(const DegreeModel& model, std::size_t depth, Rng& rng,
                      std::size_t node_cap) {
  if (model.mean() == 0.0) {
    TreeSample tree;
    tree.truncation_depth = depth;
    push_node(tree, 0, 0);
    return tree;
  }
  return sample_gwt(model, size_biased(model), depth, rng, node_cap);
}

TreeSample tree_from_graph(const Graph& g, std::uint32_t root) {
  if (root >= g.num_vertices()) throw std::out_of_range("tree root out of range");
  TreeSample tree;
  std::vector<std::uint32_t> vertex_of;  // arena index -> graph vertex
  std::vector<std::int64_t> arena_of(g.num_vertices(), -1);
  push_node(tree, 0, 0);
  vertex_of.push_back(root);
  arena_of[root] = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const std::uint32_t v = vertex_of[i];
    tree.first_child[i] = static_cast<std::uint32_t>(tree.size());
    for (std::uint32_t w : g.neighbors(v)) {
      if (i != 0 && w == vertex_of[tree.parent[i]]) continue;
      if (arena_of[w] >= 0) throw std::invalid_argument("component of the root contains a cycle");
      arena_of[w] = static_cast<std::int64_t>(tree.size());
      push_node(tree, static_cast<std::uint32_t>(i), tree.depth[i] + 1);
      vertex_of.push_back(w);
      ++tree.child_count[i];
    }
  }
  const std::size_t h = tree.height();
  tree.truncation_depth = h + (h % 2);
  return tree;
}

double h_recursion(const TreeSample& tree, double t) {
  return h_recursion(tree, t, tree.truncation_depth);
}

double h_recursion(const TreeSample& tree, double t, std::size_t depth) {
  if (!(t > 0.0)) throw std::invalid_argument("h recursion needs t > 0");
  if (depth % 2 != 0) throw std::invalid_argument("h recursion depth must be even");
  if (depth > tree.truncation_depth) {
    throw std::invalid_argument("h recursion depth exceeds the tree's truncation depth");
  }
  const std::size_t n = tree.size();
  const double t2 = t * t;
  std::vector<double> h(n, 1.0), child_sum(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    if (tree.depth[i] >= depth) continue;
    const std::uint32_t lo = tree.first_child[i];
    const std::uint32_t hi = lo + tree.child_count[i];
    double sum = 0.0, inverse = 0.0;
    for (std::uint32_t j = lo; j < hi; ++j) {
      sum += h[j];
      inverse += 1.0 / (t2 + child_sum[j]);
    }
    child_sum[i] = sum;
    h[i] = 1.0 / (1.0 + inverse);
  }
  return h[0];
}

ExtendedReal ExtendedReal::finite(double v) {
  if (v < 0.0 || std::isnan(v)) throw std::invalid_argument("extended real must be >= 0");
  if (v == 0.0) return zero();
  if (std::isinf(v)) return infinity();
  return ExtendedReal(Kind::kFinite, v);
}

double ExtendedReal::value() const {
  if (kind_ == Kind::kInfinite) throw std::domain_error("value() of infinity");
  return value_;
}

ExtendedReal ExtendedReal::reciprocal() const {
  switch (kind_) {
    case Kind::kZero:
      return infinity();
    case Kind::kInfinite:
      return zero();
    case Kind::kFinite:
      break;
  }
  return finite(1.0 / value_);
}

ExtendedReal ExtendedReal::operator+(const ExtendedReal& other) const {
  if (kind_ == Kind::kInfinite || other.kind_ == Kind::kInfinite) return infinity();
  return finite(value_ + other.value_);
}

double exact_atom_finite_tree(const TreeSample& tree) {
  const std::size_t n = tree.size();
  std::vector<double> x(n, 1.0), child_sum(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const std::uint32_t lo = tree.first_child[i];
    const std::uint32_t hi = lo + tree.child_count[i];
    double sum = 0.0;
    ExtendedReal inverse = ExtendedReal::zero();
    for (std::uint32_t j = lo; j < hi; ++j) {
      sum += x[j];
      inverse = inverse + ExtendedReal::finite(child_sum[j]).reciprocal();
    }
    child_sum[i] = sum;
    x[i] = (ExtendedReal::finite(1.0) + inverse).reciprocal().value();
  }
  return x[0];
}

AtomGridEstimate atom_at_zero_mc(const DegreeModel& model, const AtomOptions& options) {
  if (options.depths.empty() || options.t_values.empty()) {
    throw std::invalid_argument("atom estimate needs depths and t values");
  }
  for (std::size_t d : options.depths) {
    if (d % 2 != 0) throw std::invalid_argument("atom estimate depths must be even");
  }
  if (!std::is_sorted(options.depths.begin(), options.depths.end())) {
    throw std::invalid_argument("atom estimate depths must be increasing");
  }
  for (std::size_t k = 1; k < options.t_values.size(); ++k) {
    if (!(options.t_values[k] < options.t_values[k - 1])) {
      throw std::invalid_argument("t grid must be decreasing");
    }
  }
  if (options.samples == 0) throw std::invalid_argument("atom estimate needs samples");

  const std::size_t nd = options.depths.size(), nt = options.t_values.size();
  const std::size_t cells = nd * nt;
  const std::size_t max_depth = options.depths.back();
  std::vector<double> values(options.samples * cells, 0.0);
  std::vector<std::uint8_t> valid(options.samples, 0);
  std::vector<std::uint8_t> mono_t(options.samples, 1), mono_d(options.samples, 1);
  const bool degenerate = model.mean() == 0.0;
  const OffspringModel offspring = degenerate ? OffspringModel{Pmf({1.0})} : size_biased(model);

  parallel_for(options.samples, options.workers, [&](std::size_t s) {
    Rng rng = make_stream(options.seed, {tag(StreamTag::kTree), s});
    const TreeSample tree = sample_gwt(model, offspring, max_depth, rng, options.node_cap);
    if (!tree.valid) return;
    valid[s] = 1;
    double* row = values.data() + s * cells;
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t k = 0; k < nt; ++k) {
        row[d * nt + k] = h_recursion(tree, options.t_values[k], options.depths[d]);
        const double slack = 1e-12;
        if (k > 0 && row[d * nt + k] > row[d * nt + k - 1] + slack) mono_t[s] = 0;
        if (d > 0 && row[d * nt + k] > row[(d - 1) * nt + k] + slack) mono_d[s] = 0;
      }
    }
  });

  AtomGridEstimate out;
  out.depths = options.depths;
  out.t_values = options.t_values;
  out.estimate.assign(nd, std::vector<double>(nt, 0.0));
  out.std_error.assign(nd, std::vector<double>(nt, 0.0));
  std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);
  for (std::size_t s = 0; s < options.samples; ++s) {
    if (!valid[s]) {
      ++out.discarded;
      continue;
    }
    ++out.samples;
    out.monotone_in_t = out.monotone_in_t && mono_t[s];
    out.monotone_in_depth = out.monotone_in_depth && mono_d[s];
    for (std::size_t c = 0; c < cells; ++c) {
      const double v = values[s * cells + c];
      sum[c] += v;
      sumsq[c] += v * v;
    }
  }
  if (out.samples == 0) throw std::runtime_error("every sampled tree exceeded the node cap");
  const double n = static_cast<double>(out.samples);
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t k = 0; k < nt; ++k) {
      const std::size_t c = d * nt + k;
      const double mean = sum[c] / n;
      const double var = n > 1 ? std::max(0.0, (sumsq[c] - n * mean * mean) / (n - 1)) : 0.0;
      out.estimate[d][k] = mean;
      out.std_error[d][k] = std::sqrt(var / n);
    }
  }
  return out;
}

std::vector<std::complex<double>> resolvent_all(const TreeSample& tree, std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("resolvent needs Im z > 0");
  const std::size_t n = tree.size();
  std::vector<std::complex<double>> m(n);
  for (std::size_t i = n; i-- > 0;) {
    std::complex<double> sum = 0.0;
    const std::uint32_t lo = tree.first_child[i];
    for (std::uint32_t j = lo; j < lo + tree.child_count[i]; ++j) sum += m[j];
    m[i] = -1.0 / (z + sum);
  }
  return m;
}

std::complex<double> resolvent_root(const TreeSample& tree, std::complex<double> z) {
  return resolvent_all(tree, z).front();
}

void accumulate_root_density(const TreeSample& tree, std::span<const double> energies, double eta,
                             std::span<double> out) {
  if (!(eta > 0.0)) throw std::invalid_argument("resolvent needs eta > 0");
  if (out.size() != energies.size()) throw std::invalid_argument("density buffer size mismatch");
  const std::size_t g = energies.size();
  const std::size_t levels = tree.height() + 2;
  // acc[d] holds the running sum of m over the finished children of the open
  // node at depth d - 1.
  std::vector<double> acc_re(levels * g, 0.0), acc_im(levels * g, 0.0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
  stack.emplace_back(0, 0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < tree.child_count[node]) {
      const std::uint32_t child = tree.first_child[node] + next;
      ++next;
      stack.emplace_back(child, 0);
      continue;
    }
    const std::size_t d = tree.depth[node];
    double* child_re = acc_re.data() + (d + 1) * g;
    double* child_im = acc_im.data() + (d + 1) * g;
    double* own_re = acc_re.data() + d * g;
    double* own_im = acc_im.data() + d * g;
    for (std::size_t e = 0; e < g; ++e) {
      const double a = energies[e] + child_re[e];
      const double b = eta + child_im[e];
      const double inv = 1.0 / (a * a + b * b);
      own_re[e] += -a * inv;
      own_im[e] += b * inv;
      child_re[e] = 0.0;
      child_im[e] = 0.0;
    }
    stack.pop_back();
  }
  for (std::size_t e = 0; e < g; ++e) out[e] = acc_im[e] / std::numbers::pi;
}

DensityEstimate resolvent_density(const DegreeModel& model, std::span<const double> energies,
                                  const DensityOptions& options) {
  if (!(options.eta > 0.0)) throw std::invalid_argument("resolvent density needs eta > 0");
  if (options.samples == 0) throw std::invalid_argument("resolvent density needs samples");
  const std::size_t g = energies.size();
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (options.samples + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks * g, 0.0), sumsqs(chunks * g, 0.0);
  std::vector<std::size_t> used(chunks, 0), dropped(chunks, 0);
  const bool degenerate = model.mean() == 0.0;
  const OffspringModel offspring = degenerate ? OffspringModel{Pmf({1.0})} : size_biased(model);

  parallel_for(chunks, options.workers, [&](std::size_t c) {
    std::vector<double> one(g);
    const std::size_t end = std::min(options.samples, (c + 1) * kChunk);
    for (std::size_t s = c * kChunk; s < end; ++s) {
      Rng rng = make_stream(options.seed, {tag(StreamTag::kTree), s});
      const TreeSample tree = sample_gwt(model, offspring, options.depth, rng, options.node_cap);
      if (!tree.valid) {
        ++dropped[c];
        continue;
      }
      ++used[c];
      accumulate_root_density(tree, energies, options.eta, one);
      for (std::size_t e = 0; e < g; ++e) {
        sums[c * g + e] += one[e];
        sumsqs[c * g + e] += one[e] * one[e];
      }
    }
  });

  DensityEstimate out;
  out.energies.assign(energies.begin(), energies.end());
  out.eta = options.eta;
  out.density.assign(g, 0.0);
  out.std_error.assign(g, 0.0);
  std::vector<double> sumsq(g, 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    out.samples += used[c];
    out.discarded += dropped[c];
    for (std::size_t e = 0; e < g; ++e) {
      out.density[e] += sums[c * g + e];
      sumsq[e] += sumsqs[c * g + e];
    }
  }
  if (out.samples == 0) throw std::runtime_error("every sampled tree exceeded the node cap");
  const double n = static_cast<double>(out.samples);
  for (std::size_t e = 0; e < g; ++e) {
    const double mean = out.density[e] / n;
    const double var = n > 1 ? std::max(0.0, (sumsq[e] - n * mean * mean) / (n - 1)) : 0.0;
    out.density[e] = mean;
    out.std_error[e] = std::sqrt(var / n);
  }
  return out;
}

}  // namespace nullity
