#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "nullity/rank.hpp"

namespace nullity {

PrimeFieldMatrix::PrimeFieldMatrix(std::size_t rows, std::size_t cols, std::uint64_t p)
    : rows_(rows), cols_(cols), p_(p) {
  if (cols > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("matrix has too many columns");
  }
}

PrimeFieldMatrix PrimeFieldMatrix::adjacency(const Graph& g, std::uint64_t p) {
  const std::size_t n = g.num_vertices();
  PrimeFieldMatrix m(n, n, p);
  for (std::uint32_t v = 0; v < n; ++v) {
    auto& row = m.rows_[v];
    row.reserve(g.degree(v));
    for (std::uint32_t w : g.neighbors(v)) row.push_back({w, 1});
  }
  return m;
}

PrimeFieldMatrix PrimeFieldMatrix::from_dense(std::span<const std::int64_t> entries,
                                              std::size_t rows, std::size_t cols,
                                              std::uint64_t p) {
  if (entries.size() != rows * cols) throw std::invalid_argument("dense matrix size mismatch");
  PrimeFieldMatrix m(rows, cols, p);
  const auto sp = static_cast<std::int64_t>(p);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::int64_t v = entries[i * cols + j];
      if (v == 0) continue;
      std::int64_t r = v % sp;
      if (r < 0) r += sp;
      if (r != 0) m.rows_[i].push_back({static_cast<std::uint32_t>(j), static_cast<std::uint64_t>(r)});
    }
  }
  return m;
}

std::size_t PrimeFieldMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.size();
  return total;
}

void PrimeFieldMatrix::set_row(std::size_t i, std::vector<SparseEntry> entries) {
  for (auto& e : entries) {
    if (e.col >= cols_) throw std::out_of_range("matrix column out of range");
    e.value %= p_;
  }
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].col == entries[k - 1].col) throw std::invalid_argument("repeated column in row");
  }
  std::erase_if(entries, [](const SparseEntry& e) { return e.value == 0; });
  rows_.at(i) = std::move(entries);
}

namespace {

struct Entry {
  std::uint32_t col;
  std::uint64_t val;  // Montgomery form
};

class MarkowitzEliminator {
 public:
  MarkowitzEliminator(const PrimeFieldMatrix& m, std::size_t budget, std::size_t max_fill)
      : field_(m.prime()),
        rows_(m.rows()),
        row_active_(m.rows(), 1),
        col_count_(m.cols(), 0),
        col_rows_(m.cols()),
        col_stamp_(m.cols(), 0),
        col_old_(m.cols(), 0),
        budget_(budget),
        max_fill_(max_fill) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      auto& row = rows_[i];
      for (const SparseEntry& e : m.row(i)) {
        row.push_back({e.col, field_.to_mont(e.value)});
        ++col_count_[e.col];
        col_rows_[e.col].push_back(static_cast<std::uint32_t>(i));
      }
      live_ += row.size();
      if (row.empty()) {
        row_active_[i] = 0;
      } else {
        row_queue_.insert({static_cast<std::uint32_t>(row.size()), static_cast<std::uint32_t>(i)});
      }
    }
    for (std::uint32_t j = 0; j < m.cols(); ++j) {
      if (col_count_[j] > 0) col_queue_.insert({col_count_[j], j});
    }
  }

  std::optional<std::size_t> run() {
    std::size_t rank = 0;
    while (!row_queue_.empty()) {
      const auto [r, c] = choose_pivot();
      if (!eliminate(r, c)) return std::nullopt;
      ++rank;
    }
    return rank;
  }

  std::size_t work() const { return work_; }

 private:
  static constexpr std::size_t kCandidates = 4;

  static const Entry* find(const std::vector<Entry>& row, std::uint32_t col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const Entry& e, std::uint32_t c) { return e.col < c; });
    return it != row.end() && it->col == col ? &*it : nullptr;
  }

  const std::vector<std::uint32_t>& live_rows(std::uint32_t col) {
    auto& list = col_rows_[col];
    std::size_t w = 0;
    for (std::uint32_t i : list) {
      if (row_active_[i] && find(rows_[i], col) != nullptr) list[w++] = i;
    }
    list.resize(w);
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    return list;
  }

  std::pair<std::uint32_t, std::uint32_t> choose_pivot() {
    struct Choice {
      std::uint64_t cost;
      std::uint32_t col;
      std::uint32_t row;
    };
    Choice best{std::numeric_limits<std::uint64_t>::max(), 0, 0};
    auto consider = [&](std::uint64_t cost, std::uint32_t col, std::uint32_t row) {
      if (std::tie(cost, col, row) < std::tie(best.cost, best.col, best.row)) best = {cost, col, row};
    };
    std::size_t k = 0;
    for (auto it = row_queue_.begin(); it != row_queue_.end() && k < kCandidates; ++it, ++k) {
      const std::uint64_t rc = it->first;
      for (const Entry& e : rows_[it->second]) {
        consider((rc - 1) * (col_count_[e.col] - 1), e.col, it->second);
      }
    }
    k = 0;
    for (auto it = col_queue_.begin(); it != col_queue_.end() && k < kCandidates; ++it, ++k) {
      const std::uint64_t cc = it->first;
      const std::uint32_t col = it->second;
      for (std::uint32_t i : live_rows(col)) consider((rows_[i].size() - 1) * (cc - 1), col, i);
    }
    return {best.row, best.col};
  }

  void touch(std::uint32_t col, int delta) {
    if (col_stamp_[col] != step_) {
      col_stamp_[col] = step_;
      col_old_[col] = col_count_[col];
      touched_.push_back(col);
    }
    col_count_[col] = static_cast<std::uint32_t>(static_cast<int>(col_count_[col]) + delta);
  }

  bool eliminate(std::uint32_t r, std::uint32_t c) {
    ++step_;
    touched_.clear();
    const std::vector<Entry>& pivot_row = rows_[r];
    const std::uint64_t pivot_inv = field_.inv(find(pivot_row, c)->val);
    const auto& column = live_rows(c);
    targets_.assign(column.begin(), column.end());
    for (std::uint32_t i : targets_) {
      if (i == r) continue;
      std::vector<Entry>& row = rows_[i];
      row_queue_.erase({static_cast<std::uint32_t>(row.size()), i});
      const std::uint64_t factor = field_.mul(find(row, c)->val, pivot_inv);
      merged_.clear();
      auto a = row.begin();
      auto b = pivot_row.begin();
      while (a != row.end() || b != pivot_row.end()) {
        if (b == pivot_row.end() || (a != row.end() && a->col < b->col)) {
          merged_.push_back(*a++);
        } else if (a == row.end() || b->col < a->col) {
          merged_.push_back({b->col, field_.neg(field_.mul(factor, b->val))});
          touch(b->col, +1);
          col_rows_[b->col].push_back(i);
          ++b;
        } else {
          const std::uint64_t v = field_.sub(a->val, field_.mul(factor, b->val));
          if (v != 0) {
            merged_.push_back({a->col, v});
          } else {
            touch(a->col, -1);
          }
          ++a;
          ++b;
        }
      }
      work_ += row.size() + pivot_row.size();
      live_ = live_ + merged_.size() - row.size();
      std::swap(row, merged_);
      if (row.empty()) {
        row_active_[i] = 0;
      } else {
        row_queue_.insert({static_cast<std::uint32_t>(row.size()), i});
      }
      if (work_ > budget_ || live_ > max_fill_) return false;
    }
    row_queue_.erase({static_cast<std::uint32_t>(pivot_row.size()), r});
    for (const Entry& e : pivot_row) touch(e.col, -1);
    live_ -= pivot_row.size();
    row_active_[r] = 0;
    rows_[r] = {};
    for (std::uint32_t col : touched_) {
      if (col_old_[col] > 0) col_queue_.erase({col_old_[col], col});
      if (col_count_[col] > 0) col_queue_.insert({col_count_[col], col});
    }
    return true;
  }

  PrimeField field_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<std::uint8_t> row_active_;
  std::vector<std::uint32_t> col_count_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::set<std::pair<std::uint32_t, std::uint32_t>> row_queue_;  // (count, row)
  std::set<std::pair<std::uint32_t, std::uint32_t>> col_queue_;  // (count, col)
  std::vector<std::uint32_t> col_stamp_, col_old_, touched_, targets_;
  std::vector<Entry> merged_;
  std::uint32_t step_ = 0;
  std::size_t live_ = 0;
  std::size_t work_ = 0;
  std::size_t budget_;
  std::size_t max_fill_;
};

}  // namespace

std::optional<std::size_t> rank_sparse_elimination(const PrimeFieldMatrix& m, std::size_t budget,
                                                   std::size_t max_fill, std::size_t* work) {
  MarkowitzEliminator elim(m, budget, max_fill);
  auto rank = elim.run();
  if (work != nullptr) *work = elim.work();
  return rank;
}

std::size_t rank_dense_elimination(const PrimeFieldMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows * cols > 200'000'000) throw std::length_error("matrix too large for dense elimination");
  const PrimeField f(m.prime());
  std::vector<std::uint64_t> a(rows * cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (const SparseEntry& e : m.row(i)) a[i * cols + e.col] = f.to_mont(e.value);
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot * cols),
                       a.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * cols),
                       a.begin() + static_cast<std::ptrdiff_t>(rank * cols));
    }
    std::uint64_t* top = a.data() + rank * cols;
    const std::uint64_t inv = f.inv(top[c]);
    for (std::size_t j = c; j < cols; ++j) top[j] = f.mul(top[j], inv);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      std::uint64_t* row = a.data() + i * cols;
      const std::uint64_t factor = row[c];
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j) row[j] = f.sub(row[j], f.mul(factor, top[j]));
    }
    ++rank;
  }
  return rank;
}

std::size_t rank_mod_p(const PrimeFieldMatrix& m) {
  constexpr std::size_t kFillCap = 20'000'000;
  if (auto rank = rank_sparse_elimination(m, std::numeric_limits<std::size_t>::max(), kFillCap)) {
    return *rank;
  }
  return rank_dense_elimination(m);
}

}  // namespace nullity
