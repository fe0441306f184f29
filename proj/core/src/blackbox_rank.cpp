#include <stdexcept>
#include <vector>

#include "nullity/random.hpp"
#include "nullity/rank.hpp"

namespace nullity {

namespace {

// Berlekamp-Massey fed one term at a time, in Montgomery form.
class BerlekampMassey {
 public:
  explicit BerlekampMassey(const PrimeField& f) : f_(f), c_{f.one()}, b_{f.one()}, last_(f.one()) {}

  void push(std::uint64_t s) {
    seq_.push_back(s);
    const std::size_t n = seq_.size() - 1;
    const std::uint64_t d = discrepancy(n);
    if (d == 0) {
      ++shift_;
      return;
    }
    const std::uint64_t coef = f_.mul(d, f_.inv(last_));
    if (2 * length_ <= n) {
      std::vector<std::uint64_t> previous = c_;
      subtract_shifted(coef);
      length_ = n + 1 - length_;
      b_ = std::move(previous);
      last_ = d;
      shift_ = 1;
    } else {
      subtract_shifted(coef);
      ++shift_;
    }
  }

  std::size_t length() const { return length_; }
  std::size_t terms() const { return seq_.size(); }
  /// Constant term of the minimal polynomial x^L C(1/x).
  std::uint64_t constant_term() const { return length_ < c_.size() ? c_[length_] : 0; }

 private:
  std::uint64_t discrepancy(std::size_t n) const {
    std::uint64_t total = seq_[n];
    const std::size_t terms = std::min(length_, c_.size() - 1);
    std::size_t i = 1;
    // Blocks of 8 products stay below p * 2^64 for p < 2^61.
    while (i <= terms) {
      u128 acc = 0;
      const std::size_t stop = std::min(terms, i + 7);
      for (; i <= stop; ++i) acc += static_cast<u128>(c_[i]) * seq_[n - i];
      total = f_.add(total, f_.reduce(acc));
    }
    return total;
  }

  void subtract_shifted(std::uint64_t coef) {
    if (c_.size() < b_.size() + shift_) c_.resize(b_.size() + shift_, 0);
    for (std::size_t i = 0; i < b_.size(); ++i) {
      c_[i + shift_] = f_.sub(c_[i + shift_], f_.mul(coef, b_[i]));
    }
  }

  const PrimeField& f_;
  std::vector<std::uint64_t> c_, b_, seq_;
  std::uint64_t last_;
  std::size_t length_ = 0;
  std::size_t shift_ = 1;
};

constexpr std::size_t kSettleTerms = 32;

}  // namespace

std::size_t rank_blackbox(const Graph& g, std::uint64_t p, std::uint64_t seed,
                          std::size_t* matvecs) {
  const std::size_t n = g.num_vertices();
  if (matvecs != nullptr) *matvecs = 0;
  if (n == 0) return 0;
  const PrimeField f(p);
  Rng rng = make_stream(seed, {tag(StreamTag::kWiedemann), p});
  std::uniform_int_distribution<std::uint64_t> nonzero(1, p - 1), element(0, p - 1);
  std::uniform_int_distribution<std::uint64_t> small(0, 0xffffffffULL);

  // diag[i] = d_i R^2 so that mul(diag[i], reduce(sum of Montgomery values))
  // returns d_i * sum in Montgomery form.
  std::vector<std::uint64_t> diag(n), u(n), w(n), next(n);
  for (auto& d : diag) d = f.to_mont(f.to_mont(nonzero(rng)));
  for (auto& x : u) x = small(rng);
  for (auto& x : w) x = f.to_mont(element(rng));

  const auto offsets = g.offsets();
  const auto targets = g.targets();
  BerlekampMassey bm(f);
  const std::size_t cap = 2 * n + kSettleTerms;
  std::size_t products = 0;
  for (std::size_t k = 0; k < cap; ++k) {
    u128 dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += static_cast<u128>(u[i]) * w[i];
    bm.push(static_cast<std::uint64_t>(dot % p));
    if (bm.terms() >= 2 * bm.length() + kSettleTerms) break;
    for (std::size_t i = 0; i < n; ++i) {
      u128 sum = 0;
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) sum += w[targets[e]];
      next[i] = f.mul(diag[i], f.reduce(sum));
    }
    w.swap(next);
    ++products;
  }
  if (matvecs != nullptr) *matvecs = products;
  const std::size_t degree = bm.length();
  const std::size_t rank = bm.constant_term() == 0 ? (degree == 0 ? 0 : degree - 1) : degree;
  return std::min(rank, n);
}

}  // namespace nullity
