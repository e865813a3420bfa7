/**
 * @brief Contingency tables with fixed row and column margins.
 *
 * Row margins are the multiplicities of rho, column margins those of theta,
 * both in decreasing-eigenvalue order. Each table labels exactly one critical
 * submanifold of J(U) = tr(U rho U^dagger theta).
 */
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lca/error.hpp"
#include "lca/spectra.hpp"

namespace lca {

using BigCount = boost::multiprecision::cpp_int;

/// Default cap on the number of tables materialized by enumerate_tables.
inline constexpr std::uint64_t kDefaultMaxTables = 1'000'000;

/// r x s matrix of non-negative overlap numbers k_ij, stored row-major.
class ContingencyTable {
 public:
  ContingencyTable() = default;

  /// Validating constructor: entries must be non-negative and reproduce both margins.
  ContingencyTable(std::vector<int> row_margins, std::vector<int> col_margins, std::vector<int> entries)
      : rows_(std::move(row_margins)), cols_(std::move(col_margins)), entries_(std::move(entries)) {
    if (entries_.size() != rows_.size() * cols_.size()) {
      throw Error(ErrorCode::MarginMismatch, "table entry count does not match r*s");
    }
    for (int v : entries_) {
      if (v < 0) throw Error(ErrorCode::MarginMismatch, "table entry is negative");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      int sum = 0;
      for (std::size_t j = 0; j < cols_.size(); ++j) sum += entries_[i * cols_.size() + j];
      if (sum != rows_[i]) throw Error(ErrorCode::MarginMismatch, "row " + std::to_string(i) + " sum differs from margin");
    }
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      int sum = 0;
      for (std::size_t i = 0; i < rows_.size(); ++i) sum += entries_[i * cols_.size() + j];
      if (sum != cols_[j]) throw Error(ErrorCode::MarginMismatch, "column " + std::to_string(j) + " sum differs from margin");
    }
  }

  /// Convenience for literal tables; margins are taken from the entries.
  static ContingencyTable from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::MarginMismatch, "empty table");
    const std::size_t s = rows.front().size();
    std::vector<int> rm, cm(s, 0), e;
    for (const auto& row : rows) {
      if (row.size() != s) throw Error(ErrorCode::MarginMismatch, "ragged table");
      rm.push_back(std::accumulate(row.begin(), row.end(), 0));
      for (std::size_t j = 0; j < s; ++j) {
        cm[j] += row[j];
        e.push_back(row[j]);
      }
    }
    return ContingencyTable(std::move(rm), std::move(cm), std::move(e));
  }

  int rows() const noexcept { return static_cast<int>(rows_.size()); }
  int cols() const noexcept { return static_cast<int>(cols_.size()); }
  int operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_.size() + j]; }

  const std::vector<int>& row_margins() const noexcept { return rows_; }
  const std::vector<int>& col_margins() const noexcept { return cols_; }
  const std::vector<int>& entries() const noexcept { return entries_; }
  int dim() const noexcept { return std::accumulate(rows_.begin(), rows_.end(), 0); }

  std::vector<std::vector<int>> to_rows() const {
    std::vector<std::vector<int>> out(rows_.size());
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j) out[i].push_back((*this)(i, j));
    return out;
  }

  ContingencyTable transposed() const {
    std::vector<int> e;
    e.reserve(entries_.size());
    for (int j = 0; j < cols(); ++j)
      for (int i = 0; i < rows(); ++i) e.push_back((*this)(i, j));
    return ContingencyTable(cols_, rows_, std::move(e));
  }

  /// Sorted multiset of the non-zero entries; equal fingerprints give diffeomorphic submanifolds.
  std::vector<int> nonzero_fingerprint() const {
    std::vector<int> f;
    for (int v : entries_)
      if (v != 0) f.push_back(v);
    std::sort(f.begin(), f.end());
    return f;
  }

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

  /// Canonical order: lexicographic on the row-major flattening (margins first, for totality).
  friend std::strong_ordering operator<=>(const ContingencyTable& a, const ContingencyTable& b) {
    if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
    if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<int> rows_;
  std::vector<int> cols_;
  std::vector<int> entries_;
};

/**
 * A permutation of {0..N-1}. Position p of rho's expanded diagonal is paired
 * with position mapping[p] of theta's expanded diagonal, so that the
 * permutation matrix (column p carries its 1 in row mapping[p]) realizes
 * pi rho pi^dagger = diag(a_{pi^-1(0)}, ...) and J(pi) = sum_p a_p b_{mapping[p]}.
 */
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
    std::vector<char> seen(mapping_.size(), 0);
    for (int v : mapping_) {
      if (v < 0 || static_cast<std::size_t>(v) >= mapping_.size() || seen[v]) {
        throw Error(ErrorCode::InvalidPermutation, "mapping is not a bijection on 0..N-1");
      }
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
  }

  int size() const noexcept { return static_cast<int>(mapping_.size()); }
  int operator[](int p) const { return mapping_[p]; }
  const std::vector<int>& mapping() const noexcept { return mapping_; }

  Permutation inverse() const {
    std::vector<int> inv(mapping_.size());
    for (std::size_t p = 0; p < mapping_.size(); ++p) inv[mapping_[p]] = static_cast<int>(p);
    return Permutation(std::move(inv));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> mapping_;
};

namespace detail {

inline void require_same_total(const DegeneracyProfile& rows, const DegeneracyProfile& cols) {
  if (rows.n != cols.n || rows.n < 1) {
    throw Error(ErrorCode::MarginMismatch, "row margins sum to " + std::to_string(rows.n) + " but column margins sum to " +
                                               std::to_string(cols.n));
  }
}

/// Block index of every expanded position.
inline std::vector<int> block_labels(const std::vector<int>& margins) {
  std::vector<int> out;
  for (std::size_t b = 0; b < margins.size(); ++b) out.insert(out.end(), margins[b], static_cast<int>(b));
  return out;
}

/// Visit every vector x with 0 <= x[j] <= cap[j] and sum(x) = total, in ascending lexicographic order.
template <typename Visit>
void for_each_bounded_composition(const std::vector<int>& cap, int total, Visit&& visit) {
  const std::size_t s = cap.size();
  std::vector<int> suffix(s + 1, 0);
  for (std::size_t j = s; j-- > 0;) suffix[j] = suffix[j + 1] + cap[j];
  if (total > suffix[0] || total < 0) return;
  std::vector<int> x(s, 0);
  auto rec = [&](auto&& self, std::size_t j, int left) -> void {
    if (j + 1 == s) {
      x[j] = left;
      visit(x);
      return;
    }
    const int lo = std::max(0, left - suffix[j + 1]);
    const int hi = std::min(cap[j], left);
    for (int v = lo; v <= hi; ++v) {
      x[j] = v;
      self(self, j + 1, left - v);
    }
  };
  if (s == 0) return;
  rec(rec, 0, total);
}

}  // namespace detail

/**
 * Exact number of tables with the given margins.
 *
 * Rows are filled one at a time; the state after each row is the multiset of
 * residual column capacities, memoized as a sorted vector.
 */
inline BigCount count_tables(const DegeneracyProfile& rows, const DegeneracyProfile& cols) {
  detail::require_same_total(rows, cols);
  std::map<std::vector<int>, BigCount> states;
  {
    std::vector<int> start = cols.margins;
    std::sort(start.begin(), start.end());
    states.emplace(std::move(start), BigCount(1));
  }
  for (std::size_t i = 0; i + 1 < rows.margins.size(); ++i) {
    std::map<std::vector<int>, BigCount> next;
    for (const auto& [cap, ways] : states) {
      detail::for_each_bounded_composition(cap, rows.margins[i], [&](const std::vector<int>& x) {
        std::vector<int> rest(cap.size());
        for (std::size_t j = 0; j < cap.size(); ++j) rest[j] = cap[j] - x[j];
        std::sort(rest.begin(), rest.end());
        next[std::move(rest)] += ways;
      });
    }
    states = std::move(next);
  }
  // The last row is forced to equal the residual capacity.
  BigCount total = 0;
  for (const auto& [cap, ways] : states) total += ways;
  return total;
}

/**
 * All tables with the given margins, sorted ascending by the row-major
 * flattening. Throws EnumerationBudgetExceeded when the exact count exceeds
 * max_tables.
 */
inline std::vector<ContingencyTable> enumerate_tables(const DegeneracyProfile& rows, const DegeneracyProfile& cols,
                                                      std::uint64_t max_tables = kDefaultMaxTables) {
  detail::require_same_total(rows, cols);
  const BigCount projected = count_tables(rows, cols);
  if (projected > max_tables) {
    throw Error(ErrorCode::EnumerationBudgetExceeded,
                "margins admit " + projected.str() + " tables, above max_tables=" + std::to_string(max_tables));
  }
  const std::size_t r = rows.margins.size();
  const std::size_t s = cols.margins.size();
  std::vector<ContingencyTable> out;
  out.reserve(static_cast<std::size_t>(projected));
  std::vector<int> entries(r * s, 0);
  std::vector<int> cap = cols.margins;

  auto fill = [&](auto&& self, std::size_t i) -> void {
    if (i + 1 == r) {
      std::copy(cap.begin(), cap.end(), entries.begin() + static_cast<std::ptrdiff_t>(i * s));
      out.emplace_back(rows.margins, cols.margins, entries);
      return;
    }
    detail::for_each_bounded_composition(cap, rows.margins[i], [&](const std::vector<int>& x) {
      std::copy(x.begin(), x.end(), entries.begin() + static_cast<std::ptrdiff_t>(i * s));
      for (std::size_t j = 0; j < s; ++j) cap[j] -= x[j];
      self(self, i + 1);
      for (std::size_t j = 0; j < s; ++j) cap[j] += x[j];
    });
  };
  fill(fill, 0);
  return out;
}

/// k_ij = #{p : row block of p is i and column block of pi(p) is j}.
inline ContingencyTable table_of_permutation(const Permutation& pi, const DegeneracyProfile& rows,
                                             const DegeneracyProfile& cols) {
  detail::require_same_total(rows, cols);
  if (pi.size() != rows.n) {
    throw Error(ErrorCode::MarginMismatch,
                "permutation length " + std::to_string(pi.size()) + " differs from N=" + std::to_string(rows.n));
  }
  const auto rl = detail::block_labels(rows.margins);
  const auto cl = detail::block_labels(cols.margins);
  const std::size_t s = cols.margins.size();
  std::vector<int> e(rows.margins.size() * s, 0);
  for (int p = 0; p < pi.size(); ++p) ++e[static_cast<std::size_t>(rl[p]) * s + cl[pi[p]]];
  return ContingencyTable(rows.margins, cols.margins, std::move(e));
}

/// A permutation realizing the table: the positions of row block i take
/// k_i1 theta positions from column block 1, then k_i2 from block 2, and so on.
inline Permutation permutation_of_table(const ContingencyTable& k) {
  std::vector<int> next_free(static_cast<std::size_t>(k.cols()), 0);
  for (int j = 1; j < k.cols(); ++j) next_free[j] = next_free[j - 1] + k.col_margins()[j - 1];
  std::vector<int> mapping;
  mapping.reserve(static_cast<std::size_t>(k.dim()));
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j)
      for (int c = 0; c < k(i, j); ++c) mapping.push_back(next_free[j]++);
  return Permutation(std::move(mapping));
}

}  // namespace lca
