/**
 * @brief Oracle cross-checks over a corpus of margin pairs.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lca/matcore.hpp"
#include "lca/oracle.hpp"
#include "lca/tables.hpp"
#include "lca/topology.hpp"

namespace lca {

struct MarginPair {
  DegeneracyProfile rows;
  DegeneracyProfile cols;
};

/// Every composition (ordered partition) of n.
inline std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  if (n < 1) return out;
  // Bit b of mask set: cut after position b.
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> parts;
    int len = 1;
    for (int b = 0; b < n - 1; ++b) {
      if (mask & (1u << b)) {
        parts.push_back(len);
        len = 1;
      } else {
        ++len;
      }
    }
    parts.push_back(len);
    out.push_back(std::move(parts));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Uniformly random composition of n.
inline std::vector<int> random_composition(int n, Rng& rng) {
  std::vector<int> parts;
  int len = 1;
  for (int b = 0; b < n - 1; ++b) {
    if (rng.below(2)) {
      parts.push_back(len);
      len = 1;
    } else {
      ++len;
    }
  }
  parts.push_back(len);
  return parts;
}

/// All ordered pairs of compositions of every N in [1, max_n].
inline std::vector<MarginPair> exhaustive_corpus(int max_n) {
  std::vector<MarginPair> out;
  for (int n = 1; n <= max_n; ++n) {
    const auto comps = compositions(n);
    for (const auto& a : comps)
      for (const auto& b : comps) out.push_back({DegeneracyProfile(a), DegeneracyProfile(b)});
  }
  return out;
}

inline std::vector<MarginPair> random_corpus(const std::vector<int>& sizes, std::size_t count, Rng& rng) {
  std::vector<MarginPair> out;
  for (std::size_t k = 0; k < count && !sizes.empty(); ++k) {
    const int n = sizes[k % sizes.size()];
    out.push_back({DegeneracyProfile(random_composition(n, rng)), DegeneracyProfile(random_composition(n, rng))});
  }
  return out;
}

/// Strictly decreasing random values, one per part.
inline std::vector<double> random_decreasing(int parts, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(parts));
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  std::sort(v.begin(), v.end(), std::greater<>());
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] > v[i])) v[i] = std::nextafter(v[i - 1], -2.0);
  return v;
}

inline std::string margins_string(const MarginPair& mp) {
  std::ostringstream os;
  auto put = [&](const std::vector<int>& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
  };
  put(mp.rows.margins);
  os << " x ";
  put(mp.cols.margins);
  return os.str();
}

struct CheckResult {
  explicit CheckResult(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t mismatches = 0;
  std::string first_failure;

  bool passed() const noexcept { return mismatches == 0; }

  void record(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      if (mismatches == 0) first_failure = what;
      ++mismatches;
    }
  }
};

struct VerifyOptions {
  int max_n = 6;
  std::size_t random_pairs = 0;
  std::vector<int> random_sizes{7, 8};
  std::size_t value_trials = 10;
  std::uint64_t seed = 0;
};

struct VerifySummary {
  std::size_t pairs = 0;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
  }
};

/// Runs every oracle check on each pair. value_trials random value assignments per pair use opt.seed.
inline VerifySummary verify_pairs(const std::vector<MarginPair>& corpus, const VerifyOptions& opt) {
  for (const auto& mp : corpus) {
    if (mp.rows.n != mp.cols.n) throw Error(ErrorCode::MarginMismatch, "pair " + margins_string(mp) + " has unequal totals");
    if (mp.rows.n > kBruteForceMaxN) {
      throw Error(ErrorCode::BruteForceCapExceeded, "pair " + margins_string(mp) + " exceeds the brute-force cap");
    }
  }
  Rng value_rng = Rng(opt.seed).split(1);

  CheckResult sets{"enumeration_equals_brute_force"};
  CheckResult counts{"count_equals_enumeration"};
  CheckResult perm_sig{"permutation_numeric_signature"};
  CheckResult pair_sig{"trace_form_equals_pair_count"};
  CheckResult index_sum{"index_sum_is_n_squared"};
  CheckResult extrema{"unique_extrema"};
  CheckResult identity_max{"identity_table_is_maximum"};
  CheckResult max_value{"maximum_attains_largest_value"};
  CheckResult transpose{"count_transpose_symmetry"};
  CheckResult closed{"closed_form_counts"};

  for (const auto& mp : corpus) {
    const std::string label = margins_string(mp);
    const int n = mp.rows.n;
    const auto tables = enumerate_tables(mp.rows, mp.cols);
    const auto brute = brute_force_tables(mp.rows, mp.cols);

    std::vector<ContingencyTable> brute_tables;
    std::uint64_t perm_total = 0;
    for (const auto& e : brute) {
      brute_tables.push_back(e.table);
      perm_total += e.permutations;
    }
    std::uint64_t n_fact = 1;
    for (int k = 2; k <= n; ++k) n_fact *= static_cast<std::uint64_t>(k);
    sets.record(tables == brute_tables && perm_total == n_fact, label);
    counts.record(count_tables(mp.rows, mp.cols) == tables.size(), label);
    transpose.record(count_tables(mp.rows, mp.cols) == count_tables(mp.cols, mp.rows), label);
    if (auto cf = closed_form_counts(mp.rows, mp.cols)) closed.record(cf->count == tables.size(), label);

    std::size_t dplus_zero = 0, dminus_zero = 0;
    for (const auto& k : tables) {
      const Signature sig = signature(k);
      const std::int64_t d0 = dimension(k);
      pair_sig.record(sig == signature_by_pair_count(k), label);
      index_sum.record(d0 + sig.dplus + sig.dminus == std::int64_t{n} * n, label);
      dplus_zero += sig.dplus == 0;
      dminus_zero += sig.dminus == 0;
    }
    extrema.record(dplus_zero == 1 && dminus_zero == 1, label);

    const ContingencyTable sorted = table_of_permutation(Permutation::identity(n), mp.rows, mp.cols);
    identity_max.record(signature(sorted).dplus == 0, label);

    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    bool all_match = true;
    do {
      const Permutation pi(m);
      const ContingencyTable k = table_of_permutation(pi, mp.rows, mp.cols);
      const SignatureTriple t = numeric_signature(expanded_diagonal(pi, mp.rows, mp.cols));
      const Signature sig = signature(k);
      if (t != SignatureTriple{dimension(k), sig.dplus, sig.dminus}) all_match = false;
    } while (std::next_permutation(m.begin(), m.end()));
    perm_sig.record(all_match, label);

    for (std::size_t t = 0; t < opt.value_trials; ++t) {
      const Spectrum rho(random_decreasing(mp.rows.parts(), value_rng), mp.rows.margins);
      const Spectrum theta(random_decreasing(mp.cols.parts(), value_rng), mp.cols.margins);
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& k : tables) best = std::max(best, landscape_value(k, rho, theta));
      const double at_sorted = landscape_value(sorted, rho, theta);
      max_value.record(at_sorted >= best - 1e-12 * std::max(1.0, std::abs(best)), label);
    }
  }

  VerifySummary out;
  out.pairs = corpus.size();
  out.checks = {sets, counts, perm_sig, pair_sig, index_sum, extrema, identity_max, max_value, transpose, closed};
  return out;
}

/// All compositions up to max_n plus random_pairs random pairs drawn at random_sizes.
inline VerifySummary verify_corpus(const VerifyOptions& opt) {
  if (opt.max_n < 1 || opt.max_n > kBruteForceMaxN) {
    throw Error(ErrorCode::InvalidArgument, "max_n must lie in [1, " + std::to_string(kBruteForceMaxN) + "]");
  }
  for (int s : opt.random_sizes) {
    if (s < 1 || s > kBruteForceMaxN) throw Error(ErrorCode::InvalidArgument, "random pair size out of range");
  }
  Rng pair_rng = Rng(opt.seed).split(0);
  auto corpus = exhaustive_corpus(opt.max_n);
  for (auto& mp : random_corpus(opt.random_sizes, opt.random_pairs, pair_rng)) corpus.push_back(std::move(mp));
  return verify_pairs(corpus, opt);
}

}  // namespace lca
