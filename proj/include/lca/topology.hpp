/**
 * @brief Closed-form characteristics of critical submanifolds.
 *
 * Every quantity here is a function of a contingency table alone (plus the
 * eigenvalues, for the landscape value). Index arithmetic is exact integer
 * matrix algebra; the only floating point values are landscape values J.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lca/error.hpp"
#include "lca/spectra.hpp"
#include "lca/tables.hpp"

namespace lca {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class Kind { maximum, minimum, saddle, flat };

inline std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::maximum: return "maximum";
    case Kind::minimum: return "minimum";
    case Kind::saddle: return "saddle";
    case Kind::flat: return "flat";
  }
  return "saddle";
}

inline Kind kind_from_string(std::string_view s) {
  if (s == "maximum") return Kind::maximum;
  if (s == "minimum") return Kind::minimum;
  if (s == "saddle") return Kind::saddle;
  if (s == "flat") return Kind::flat;
  throw Error(ErrorCode::InvalidArgument, "unknown kind '" + std::string(s) + "'");
}

/// Numbers of positive and negative Hessian principal directions.
struct Signature {
  std::int64_t dplus = 0;
  std::int64_t dminus = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Strictly upper triangular 0/1 matrix: sigma_ij = 1 iff i < j.
inline IntMatrix index_matrix(int t) {
  IntMatrix m = IntMatrix::Zero(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) m(i, j) = 1;
  return m;
}

inline IntMatrix to_int_matrix(const ContingencyTable& k) {
  IntMatrix m(k.rows(), k.cols());
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j) m(i, j) = k(i, j);
  return m;
}

/// Submanifold dimension D0 = sum n_i^2 + sum m_j^2 - sum k_ij^2.
inline std::int64_t dimension(const ContingencyTable& k) {
  std::int64_t d = 0;
  for (int n : k.row_margins()) d += std::int64_t{n} * n;
  for (int m : k.col_margins()) d += std::int64_t{m} * m;
  for (int v : k.entries()) d -= std::int64_t{v} * v;
  return d;
}

/// D+ = 2 tr(J_r K J_s K^T), D- = 2 tr(J_r K J_s^T K^T).
inline Signature signature(const ContingencyTable& k) {
  const IntMatrix kk = to_int_matrix(k);
  const IntMatrix jr = index_matrix(k.rows());
  const IntMatrix js = index_matrix(k.cols());
  Signature sig;
  sig.dplus = 2 * (jr * kk * js * kk.transpose()).trace();
  sig.dminus = 2 * (jr * kk * js.transpose() * kk.transpose()).trace();
  return sig;
}

/// Direct pair count: D+/- = 2 * sum over cell pairs with (i-p)(j-q) < 0 / > 0, i < p.
inline Signature signature_by_pair_count(const ContingencyTable& k) {
  Signature sig;
  for (int i = 0; i < k.rows(); ++i)
    for (int p = i + 1; p < k.rows(); ++p)
      for (int j = 0; j < k.cols(); ++j)
        for (int q = 0; q < k.cols(); ++q) {
          const std::int64_t w = std::int64_t{k(i, j)} * k(p, q);
          if (j > q) sig.dplus += 2 * w;
          if (j < q) sig.dminus += 2 * w;
        }
  return sig;
}

/// J(K) = sum_ij k_ij lambda_i epsilon_j.
inline double landscape_value(const ContingencyTable& k, const Spectrum& lam, const Spectrum& eps) {
  if (k.row_margins() != lam.multiplicities() || k.col_margins() != eps.multiplicities()) {
    throw Error(ErrorCode::MarginMismatch, "table margins do not match the spectra's multiplicities");
  }
  double j = 0.0;
  for (int i = 0; i < k.rows(); ++i)
    for (int c = 0; c < k.cols(); ++c) j += k(i, c) * lam.distinct()[i] * eps.distinct()[c];
  return j;
}

inline Kind classify(std::int64_t n, std::int64_t d0, std::int64_t dplus, std::int64_t dminus) {
  if (d0 < 0 || dplus < 0 || dminus < 0 || d0 + dplus + dminus != n * n) {
    throw Error(ErrorCode::InternalInvariantViolation,
                "index triple (" + std::to_string(d0) + "," + std::to_string(dplus) + "," + std::to_string(dminus) +
                    ") does not sum to N^2=" + std::to_string(n * n));
  }
  if (dplus == 0 && dminus == 0) return Kind::flat;
  if (dplus == 0) return Kind::maximum;
  if (dminus == 0) return Kind::minimum;
  return Kind::saddle;
}

struct SubmanifoldRecord {
  ContingencyTable table;
  double j = 0.0;
  std::int64_t d0 = 0;
  std::int64_t dplus = 0;
  std::int64_t dminus = 0;
  Kind kind = Kind::saddle;

  friend bool operator==(const SubmanifoldRecord&, const SubmanifoldRecord&) = default;
};

inline SubmanifoldRecord make_record(const ContingencyTable& k, const Spectrum& rho, const Spectrum& theta) {
  SubmanifoldRecord rec;
  rec.table = k;
  rec.j = landscape_value(k, rho, theta);
  rec.d0 = dimension(k);
  const Signature sig = signature(k);
  rec.dplus = sig.dplus;
  rec.dminus = sig.dminus;
  rec.kind = classify(k.dim(), rec.d0, rec.dplus, rec.dminus);
  return rec;
}

struct ReportSummary {
  int n = 0;
  std::uint64_t table_count = 0;
  double j_max = 0.0;
  double j_min = 0.0;
  std::vector<std::string> warnings;

  friend bool operator==(const ReportSummary&, const ReportSummary&) = default;
};

struct LandscapeReport {
  Spectrum rho;
  Spectrum theta;
  std::vector<SubmanifoldRecord> records;
  ReportSummary summary;

  friend bool operator==(const LandscapeReport&, const LandscapeReport&) = default;
};

struct AnalyzeLimits {
  std::uint64_t max_tables = kDefaultMaxTables;
};

/// Descending J, ties broken by canonical table order.
inline void sort_records(std::vector<SubmanifoldRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const SubmanifoldRecord& a, const SubmanifoldRecord& b) {
    if (a.j != b.j) return a.j > b.j;
    return a.table < b.table;
  });
}

inline LandscapeReport analyze(const Spectrum& rho, const Spectrum& theta, const AnalyzeLimits& limits = {}) {
  if (rho.dim() != theta.dim()) {
    throw Error(ErrorCode::MarginMismatch, "rho has dimension " + std::to_string(rho.dim()) + " but theta has " +
                                               std::to_string(theta.dim()));
  }
  const auto tables = enumerate_tables(degeneracy_profile(rho), degeneracy_profile(theta), limits.max_tables);

  LandscapeReport report;
  report.rho = rho;
  report.theta = theta;
  report.records.reserve(tables.size());
  for (const auto& k : tables) report.records.push_back(make_record(k, rho, theta));
  sort_records(report.records);

  auto& sum = report.summary;
  sum.n = rho.dim();
  sum.table_count = report.records.size();
  sum.j_max = report.records.front().j;
  sum.j_min = report.records.back().j;
  if (std::abs(rho.trace() - 1.0) > kTraceWarningTol) {
    sum.warnings.push_back("rho trace is " + std::to_string(rho.trace()) + ", not 1");
  }

  std::size_t maxima = 0, minima = 0, flats = 0;
  for (const auto& r : report.records) {
    maxima += r.kind == Kind::maximum;
    minima += r.kind == Kind::minimum;
    flats += r.kind == Kind::flat;
  }
  const bool degenerate = rho.levels() == 1 || theta.levels() == 1;
  if (degenerate && (flats != 1 || report.records.size() != 1)) {
    sum.warnings.push_back("expected a single flat record for a fully degenerate operator");
  }
  if (!degenerate && (maxima != 1 || minima != 1)) {
    sum.warnings.push_back("expected exactly one maximum and one minimum, found " + std::to_string(maxima) + " and " +
                           std::to_string(minima));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Special profiles with closed-form counts.

enum class SpecialCase { pure_state, nondegenerate_observable, molecular_projector, molecular_two_row };

inline std::string_view to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::pure_state: return "pure_state";
    case SpecialCase::nondegenerate_observable: return "nondegenerate_observable";
    case SpecialCase::molecular_projector: return "molecular_projector";
    case SpecialCase::molecular_two_row: return "molecular_two_row";
  }
  return "";
}

/// Closed-form (D0, D+, D-) of one submanifold, or of one distinguished submanifold.
struct IndexTriple {
  std::int64_t d0 = 0;
  std::int64_t dplus = 0;
  std::int64_t dminus = 0;
  friend bool operator==(const IndexTriple&, const IndexTriple&) = default;
};

struct CountReport {
  SpecialCase which = SpecialCase::pure_state;
  BigCount count = 0;
  /// Pure state: the triple of K_j for every column j, in column order.
  std::vector<IndexTriple> per_table;
  /// D0 shared by every submanifold (non-degenerate observable only).
  std::optional<std::int64_t> common_d0;
  /// Closed-form D0 of the global maximum submanifold.
  std::optional<std::int64_t> max_d0;
};

namespace detail {

inline BigCount factorial(int n) {
  BigCount f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace detail

/**
 * Detect whether the profile pair has one of the known closed-form counts.
 * Detection is purely structural. Returns nullopt for the general case.
 *
 * - pure state: rho margins (1, N-1);
 * - non-degenerate observable: theta margins all ones;
 * - molecular projector: theta margins (n, N-n), rho margins (n, ..., n, N0) with N0 >= n;
 * - molecular two-row: theta margins (M, N-M), rho margins (n_1, ..., n_r, N0)
 *   with min(M, N-M) >= n_1 + ... + n_r.
 */
inline std::optional<CountReport> closed_form_counts(const DegeneracyProfile& rho, const DegeneracyProfile& theta) {
  if (rho.n != theta.n) return std::nullopt;
  const std::int64_t n = rho.n;
  const auto& nm = rho.margins;
  const auto& mm = theta.margins;

  if (nm.size() == 2 && nm[0] == 1 && n >= 2) {
    CountReport rep;
    rep.which = SpecialCase::pure_state;
    rep.count = mm.size();
    std::int64_t before = 0;
    for (std::size_t j = 0; j < mm.size(); ++j) {
      std::int64_t after = n - before - mm[j];
      rep.per_table.push_back({n * (n - 2) + 2 * mm[j], 2 * before, 2 * after});
      before += mm[j];
    }
    rep.max_d0 = n * (n - 2) + 2 * mm.front();
    return rep;
  }

  if (std::all_of(mm.begin(), mm.end(), [](int m) { return m == 1; })) {
    CountReport rep;
    rep.which = SpecialCase::nondegenerate_observable;
    BigCount c = detail::factorial(static_cast<int>(n));
    std::int64_t sq = 0;
    for (int v : nm) {
      c /= detail::factorial(v);
      sq += std::int64_t{v} * v;
    }
    rep.count = c;
    rep.common_d0 = sq;
    rep.max_d0 = sq;
    return rep;
  }

  if (mm.size() == 2 && nm.size() >= 2) {
    const int m_target = mm[0];
    const int n0 = nm.back();
    const std::vector<int> populated(nm.begin(), nm.end() - 1);
    const std::int64_t pop_sum = std::accumulate(populated.begin(), populated.end(), std::int64_t{0});

    const bool equal_n = std::all_of(populated.begin(), populated.end(), [&](int v) { return v == m_target; });
    if (equal_n && n0 >= m_target) {
      const int r = static_cast<int>(populated.size());
      CountReport rep;
      rep.which = SpecialCase::molecular_projector;
      rep.count = detail::factorial(m_target + r) / (detail::factorial(m_target) * detail::factorial(r));
      rep.max_d0 = (n - m_target) * (n - m_target) + std::int64_t{m_target} * m_target;
      return rep;
    }
    if (std::min<std::int64_t>(m_target, n - m_target) >= pop_sum) {
      CountReport rep;
      rep.which = SpecialCase::molecular_two_row;
      BigCount c = 1;
      for (int v : populated) c *= (v + 1);
      rep.count = c;
      rep.max_d0 = n * n - 2 * (n - m_target) * pop_sum;
      return rep;
    }
  }
  return std::nullopt;
}

struct MolecularDimension {
  std::int64_t d0 = 0;
  std::optional<std::string> warning;
};

/// D0 = N^2 - 2 (N - M)(n_1 + ... + n_r) for the global maximum of the molecular projector landscape.
inline MolecularDimension max_submanifold_dimension_molecular(std::int64_t n, std::int64_t m,
                                                              const std::vector<int>& populated) {
  const std::int64_t s = std::accumulate(populated.begin(), populated.end(), std::int64_t{0});
  MolecularDimension out;
  out.d0 = n * n - 2 * (n - m) * s;
  if (!(m > s && n - m > s)) {
    out.warning = "outside the regime M > sum(n_i) and N - M > sum(n_i)";
  }
  return out;
}

}  // namespace lca
