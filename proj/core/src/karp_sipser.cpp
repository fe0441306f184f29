#include "nullity/karp_sipser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nullity/parallel.hpp"

namespace nullity {

namespace {

constexpr std::uint32_t kNever = std::numeric_limits<std::uint32_t>::max();

std::uint32_t alive_neighbor(const Graph& g, const std::vector<std::uint8_t>& alive,
                             std::uint32_t v) {
  for (std::uint32_t w : g.neighbors(v)) {
    if (alive[w]) return w;
  }
  throw std::logic_error("leaf without a live neighbor");
}

void finish(const Graph& g, const std::vector<std::uint8_t>& alive, KSResult& r) {
  std::vector<std::uint32_t> remaining;
  for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
    switch (r.label[v]) {
      case LeafLabel::kA:
        r.a_set.push_back(v);
        break;
      case LeafLabel::kB:
        r.b_set.push_back(v);
        break;
      case LeafLabel::kP:
        r.p_set.push_back(v);
        break;
      case LeafLabel::kCore:
        if (alive[v]) remaining.push_back(v);
        break;
    }
  }
  r.core = induced_subgraph(g, remaining);
}

}  // namespace

KSResult karp_sipser(const Graph& g) {
  const std::size_t n = g.num_vertices();
  KSResult r;
  r.label.assign(n, LeafLabel::kCore);
  r.entered.assign(n, kNever);
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<std::uint32_t> degree(n);
  std::vector<std::uint32_t> candidates;
  std::int64_t a_count = 0, b_count = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    degree[v] = static_cast<std::uint32_t>(g.degree(v));
    if (degree[v] == 0) {
      r.label[v] = LeafLabel::kA;
      r.entered[v] = 0;
      alive[v] = 0;
      ++a_count;
    } else if (degree[v] == 1) {
      candidates.push_back(v);
    }
  }
  r.lr_trace.push_back(a_count);

  std::vector<std::uint32_t> stamp(n, kNever);
  std::vector<std::uint8_t> in_w(n, 0);
  std::vector<std::uint32_t> removed, next;
  for (std::uint32_t t = 0;; ++t) {
    removed.clear();
    // Classify against the degrees of G_t before touching anything.
    for (std::uint32_t v : candidates) {
      if (!alive[v] || stamp[v] == t) continue;
      stamp[v] = t;
      if (degree[v] == 0) {
        r.label[v] = LeafLabel::kA;
        ++a_count;
        removed.push_back(v);
      } else if (degree[v] == 1) {
        const std::uint32_t w = alive_neighbor(g, alive, v);
        if (degree[w] == 1) {
          r.label[v] = LeafLabel::kP;
        } else {
          r.label[v] = LeafLabel::kA;
          ++a_count;
          if (!in_w[w]) {
            in_w[w] = 1;
            r.label[w] = LeafLabel::kB;
            ++b_count;
            removed.push_back(w);
          }
        }
        removed.push_back(v);
      }
    }
    if (removed.empty()) {
      r.rounds = t;
      break;
    }
    for (std::uint32_t v : removed) {
      alive[v] = 0;
      r.entered[v] = t + 1;
    }
    next.clear();
    for (std::uint32_t v : removed) {
      for (std::uint32_t w : g.neighbors(v)) {
        if (alive[w] && --degree[w] <= 1) next.push_back(w);
      }
    }
    candidates.swap(next);
    r.lr_trace.push_back(a_count - b_count);
  }
  finish(g, alive, r);
  return r;
}

KSResult karp_sipser_queue(const Graph& g) {
  const std::size_t n = g.num_vertices();
  KSResult r;
  r.label.assign(n, LeafLabel::kCore);
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<std::uint32_t> degree(n);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t v = 0; v < n; ++v) {
    degree[v] = static_cast<std::uint32_t>(g.degree(v));
    if (degree[v] <= 1) stack.push_back(v);
  }
  std::reverse(stack.begin(), stack.end());
  std::int64_t lr = 0;
  auto kill = [&](std::uint32_t v) {
    alive[v] = 0;
    for (std::uint32_t w : g.neighbors(v)) {
      if (alive[w] && --degree[w] <= 1) stack.push_back(w);
    }
  };
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    if (!alive[v]) continue;
    if (degree[v] == 0) {
      r.label[v] = LeafLabel::kA;
      ++lr;
      alive[v] = 0;
      continue;
    }
    const std::uint32_t w = alive_neighbor(g, alive, v);
    if (degree[w] == 1) {
      r.label[v] = r.label[w] = LeafLabel::kP;
    } else {
      r.label[v] = LeafLabel::kA;
      r.label[w] = LeafLabel::kB;
    }
    alive[v] = 0;
    alive[w] = 0;
    kill(v);
    kill(w);
  }
  r.lr_trace.push_back(lr);
  finish(g, alive, r);
  return r;
}

KSMarginals ks_round_marginals(const GraphFamily& family, std::size_t rounds, std::size_t n,
                               std::size_t seeds, std::uint64_t seed, unsigned workers) {
  if (seeds == 0) throw std::invalid_argument("round marginals need at least one seed");
  const std::size_t width = rounds + 1;
  std::vector<double> a_frac(seeds * width, 0.0), b_frac(seeds * width, 0.0);
  parallel_for(seeds, workers, [&](std::size_t s) {
    const Graph g = family.generate(n, derive_seed(seed, {tag(StreamTag::kGraph), s}));
    const KSResult ks = karp_sipser(g);
    std::vector<std::size_t> a_new(width, 0), b_new(width, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (ks.entered[v] == kNever || ks.entered[v] >= width) continue;
      if (ks.label[v] == LeafLabel::kA) ++a_new[ks.entered[v]];
      if (ks.label[v] == LeafLabel::kB) ++b_new[ks.entered[v]];
    }
    std::size_t a = 0, b = 0;
    for (std::size_t t = 0; t < width; ++t) {
      a += a_new[t];
      b += b_new[t];
      a_frac[s * width + t] = static_cast<double>(a) / static_cast<double>(n);
      b_frac[s * width + t] = static_cast<double>(b) / static_cast<double>(n);
    }
  });

  KSMarginals out;
  out.family = family.label;
  out.n = n;
  out.seeds = seeds;
  out.p_in_a.assign(width, 0.0);
  out.p_in_b.assign(width, 0.0);
  out.lr.assign(width, 0.0);
  out.lr_std_error.assign(width, 0.0);
  const double k = static_cast<double>(seeds);
  for (std::size_t t = 0; t < width; ++t) {
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const double a = a_frac[s * width + t], b = b_frac[s * width + t];
      out.p_in_a[t] += a / k;
      out.p_in_b[t] += b / k;
      sum_sq += (a - b) * (a - b);
    }
    out.lr[t] = out.p_in_a[t] - out.p_in_b[t];
    if (seeds > 1) {
      const double var = std::max(0.0, (sum_sq - k * out.lr[t] * out.lr[t]) / (k - 1.0));
      out.lr_std_error[t] = std::sqrt(var / k);
    }
  }
  return out;
}

}  // namespace nullity
