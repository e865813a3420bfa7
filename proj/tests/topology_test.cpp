#include <gtest/gtest.h>

#include <random>

#include "lca/topology.hpp"

using namespace lca;

namespace {

DegeneracyProfile P(std::vector<int> m) { return DegeneracyProfile(std::move(m)); }
ContingencyTable T(std::vector<std::vector<int>> rows) { return ContingencyTable::from_rows(rows); }

std::vector<int> random_margins(int n, std::mt19937_64& gen) {
  std::vector<int> out;
  int len = 1;
  std::bernoulli_distribution cut(0.5);
  for (int b = 0; b < n - 1; ++b) {
    if (cut(gen)) {
      out.push_back(len);
      len = 1;
    } else {
      ++len;
    }
  }
  out.push_back(len);
  return out;
}

struct Table4Row {
  ContingencyTable k;
  std::int64_t d0, dplus, dminus;
  Kind kind;
};

std::vector<Table4Row> table4() {
  return {{T({{0, 1}, {0, 3}, {2, 2}}), 48, 16, 0, Kind::minimum},
          {T({{0, 1}, {1, 2}, {1, 3}}), 50, 8, 6, Kind::saddle},
          {T({{1, 0}, {0, 3}, {1, 3}}), 46, 6, 12, Kind::saddle},
          {T({{0, 1}, {2, 1}, {0, 4}}), 44, 4, 16, Kind::saddle},
          {T({{1, 0}, {1, 2}, {0, 4}}), 44, 0, 20, Kind::maximum}};
}

}  // namespace

TEST(IndexMatrix, StrictlyUpperTriangular) {
  const IntMatrix j = index_matrix(4);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 4; ++c) EXPECT_EQ(j(i, c), i < c ? 1 : 0);
}

TEST(Dimension, Examples) {
  EXPECT_EQ(dimension(T({{0, 1}, {0, 3}, {2, 2}})), 48);
  EXPECT_EQ(dimension(T({{5}})), 25);
  EXPECT_EQ(dimension(T({{1, 0}, {1, 1}})), 7);  // 5 + 5 - 3
}

TEST(Signature, EightLevelTable) {
  for (const auto& row : table4()) {
    EXPECT_EQ(dimension(row.k), row.d0);
    const Signature sig = signature(row.k);
    EXPECT_EQ(sig.dplus, row.dplus);
    EXPECT_EQ(sig.dminus, row.dminus);
    EXPECT_EQ(classify(8, row.d0, row.dplus, row.dminus), row.kind);
  }
  EXPECT_EQ(signature(T({{4}})), (Signature{0, 0}));
}

TEST(Signature, TraceFormEqualsPairCountOnRandomTables) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + trial % 9;
    const auto tables = enumerate_tables(P(random_margins(n, gen)), P(random_margins(n, gen)));
    for (const auto& k : tables) {
      const Signature a = signature(k);
      EXPECT_EQ(a, signature_by_pair_count(k));
      EXPECT_EQ(a.dplus % 2, 0);
      EXPECT_EQ(a.dminus % 2, 0);
      EXPECT_EQ(dimension(k) + a.dplus + a.dminus, std::int64_t{n} * n);
    }
  }
}

TEST(LandscapeValue, ThreeLevel) {
  const Spectrum lam({0.4, 0.3}, {1, 2});
  const Spectrum eps({0.4, 0.2}, {2, 1});
  EXPECT_NEAR(landscape_value(T({{1, 0}, {1, 1}}), lam, eps), 0.34, 1e-15);
  EXPECT_NEAR(landscape_value(T({{0, 1}, {2, 0}}), lam, eps), 0.32, 1e-15);
  EXPECT_THROW(landscape_value(T({{1, 0}, {1, 1}}), eps, lam), Error);
}

TEST(LandscapeValue, FullyDegenerateGivesTraceTimesValue) {
  const int n = 5;
  const Spectrum lam({1.0 / n}, {n});
  const Spectrum eps({2.5}, {n});
  EXPECT_NEAR(landscape_value(T({{n}}), lam, eps), 2.5, 1e-15);
}

TEST(LandscapeValue, MaximumIsRearrangementPairing) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    const auto rm = random_margins(n, gen), cm = random_margins(n, gen);
    auto values = [&](std::size_t k) {
      std::vector<double> v(k);
      for (auto& x : v) x = u(gen);
      std::sort(v.begin(), v.end(), std::greater<>());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      return v;
    };
    auto lv = values(rm.size()), ev = values(cm.size());
    if (lv.size() != rm.size() || ev.size() != cm.size()) continue;
    const Spectrum lam(lv, rm), eps(ev, cm);
    double best = -1e300;
    for (const auto& k : enumerate_tables(P(rm), P(cm))) best = std::max(best, landscape_value(k, lam, eps));
    const auto a = lam.expanded(), b = eps.expanded();
    double pairing = 0;
    for (int p = 0; p < n; ++p) pairing += a[p] * b[p];
    EXPECT_NEAR(best, pairing, 1e-12);
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(8, 44, 0, 20), Kind::maximum);
  EXPECT_EQ(classify(8, 48, 16, 0), Kind::minimum);
  EXPECT_EQ(classify(3, 9, 0, 0), Kind::flat);
  EXPECT_EQ(classify(8, 50, 8, 6), Kind::saddle);
  try {
    classify(8, 44, 0, 19);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InternalInvariantViolation);
  }
}

TEST(Analyze, EightLevelReport) {
  const Spectrum rho({0.4, 0.1, 0.075}, {1, 3, 4});
  const Spectrum theta({1.0, 0.0}, {2, 6});
  const LandscapeReport rep = analyze(rho, theta);
  ASSERT_EQ(rep.records.size(), 5u);
  for (const auto& row : table4()) {
    auto it = std::find_if(rep.records.begin(), rep.records.end(), [&](const auto& r) { return r.table == row.k; });
    ASSERT_NE(it, rep.records.end());
    EXPECT_EQ(it->d0, row.d0);
    EXPECT_EQ(it->dplus, row.dplus);
    EXPECT_EQ(it->dminus, row.dminus);
    EXPECT_EQ(it->kind, row.kind);
  }
  for (std::size_t i = 1; i < rep.records.size(); ++i) EXPECT_GE(rep.records[i - 1].j, rep.records[i].j);
  EXPECT_TRUE(rep.summary.warnings.empty());
  // The maximum and the fourth submanifold share their non-zero entries.
  EXPECT_EQ(T({{1, 0}, {1, 2}, {0, 4}}).nonzero_fingerprint(), T({{0, 1}, {2, 1}, {0, 4}}).nonzero_fingerprint());
}

TEST(Analyze, ThreeLevelReport) {
  const LandscapeReport rep = analyze(build_spectrum({0.4, 0.3, 0.3}), build_spectrum({0.4, 0.4, 0.2}));
  ASSERT_EQ(rep.records.size(), 2u);
  EXPECT_NEAR(rep.summary.j_max, 0.34, 1e-12);
  EXPECT_NEAR(rep.summary.j_min, 0.32, 1e-12);
  EXPECT_EQ(rep.records[0].table, T({{1, 0}, {1, 1}}));
  EXPECT_EQ(rep.records[0].kind, Kind::maximum);
  EXPECT_EQ(rep.records[1].kind, Kind::minimum);
}

TEST(Analyze, PureStateHasOneRecordPerObservableLevel) {
  const Spectrum rho({1.0, 0.0}, {1, 5});
  const Spectrum theta({3.0, 2.0, 1.0, 0.0}, {2, 1, 2, 1});
  EXPECT_EQ(analyze(rho, theta).records.size(), 4u);
}

TEST(Analyze, FlatWhenOneOperatorIsScalar) {
  const LandscapeReport rep = analyze(Spectrum({0.25}, {4}), Spectrum({2.0, 1.0}, {1, 3}));
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_EQ(rep.records[0].kind, Kind::flat);
  EXPECT_EQ(rep.records[0].d0, 16);
  EXPECT_TRUE(rep.summary.warnings.empty());
}

TEST(Analyze, WarnsOnNonUnitTrace) {
  const LandscapeReport rep = analyze(Spectrum({2.0, 1.0}, {1, 1}), Spectrum({1.0, 0.0}, {1, 1}));
  ASSERT_EQ(rep.summary.warnings.size(), 1u);
  EXPECT_THROW(analyze(Spectrum({1.0}, {2}), Spectrum({1.0}, {3})), Error);
}

TEST(Analyze, TiesKeepSeparateRecordsInCanonicalOrder) {
  // First rows (1,0,1) and (0,2,0) both give J = 0.5 exactly.
  const Spectrum rho({0.5, 0.0}, {2, 2});
  const Spectrum theta({1.0, 0.5, 0.0}, {1, 2, 1});
  const LandscapeReport rep = analyze(rho, theta);
  ASSERT_EQ(rep.records.size(), 4u);
  EXPECT_EQ(rep.records[1].j, 0.5);
  EXPECT_EQ(rep.records[2].j, 0.5);
  EXPECT_EQ(rep.records[1].table, T({{0, 2, 0}, {1, 0, 1}}));
  EXPECT_EQ(rep.records[2].table, T({{1, 0, 1}, {0, 2, 0}}));
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    const auto& a = rep.records[i - 1];
    const auto& b = rep.records[i];
    EXPECT_TRUE(a.j > b.j || (a.j == b.j && a.table < b.table));
  }
}

TEST(ClosedFormCounts, PureState) {
  const auto cf = closed_form_counts(P({1, 3}), P({1, 2, 1}));
  ASSERT_TRUE(cf);
  EXPECT_EQ(cf->which, SpecialCase::pure_state);
  EXPECT_EQ(cf->count, 3);
  ASSERT_EQ(cf->per_table.size(), 3u);
  EXPECT_EQ(cf->per_table[0], (IndexTriple{10, 0, 6}));
  EXPECT_EQ(*cf->max_d0, 10);
  // Each per-table triple matches the table with the single 1 in column j.
  const auto tables = enumerate_tables(P({1, 3}), P({1, 2, 1}));
  for (const auto& k : tables) {
    int j = 0;
    while (k(0, j) == 0) ++j;
    const Signature sig = signature(k);
    EXPECT_EQ(cf->per_table[j], (IndexTriple{dimension(k), sig.dplus, sig.dminus}));
  }
}

TEST(ClosedFormCounts, NonDegenerateObservable) {
  const auto cf = closed_form_counts(P({2, 2}), P({1, 1, 1, 1}));
  ASSERT_TRUE(cf);
  EXPECT_EQ(cf->which, SpecialCase::nondegenerate_observable);
  EXPECT_EQ(cf->count, 6);
  EXPECT_EQ(*cf->common_d0, 8);
  for (const auto& k : enumerate_tables(P({2, 2}), P({1, 1, 1, 1}))) EXPECT_EQ(dimension(k), 8);
}

TEST(ClosedFormCounts, MolecularTwoRow) {
  // theta projector on M = 4 of N = 10 levels; rho populates degeneracies (1, 2), N0 = 7.
  const auto cf = closed_form_counts(P({1, 2, 7}), P({4, 6}));
  ASSERT_TRUE(cf);
  EXPECT_EQ(cf->which, SpecialCase::molecular_two_row);
  EXPECT_EQ(cf->count, 6);
  EXPECT_EQ(count_tables(P({4, 6}), P({1, 2, 7})), 6);
}

TEST(ClosedFormCounts, MolecularProjector) {
  // n = 2, r = 3, N = 10: (n + r)! / (n! r!) = 10.
  const auto cf = closed_form_counts(P({2, 2, 2, 4}), P({2, 8}));
  ASSERT_TRUE(cf);
  EXPECT_EQ(cf->which, SpecialCase::molecular_projector);
  EXPECT_EQ(cf->count, 10);
  EXPECT_EQ(count_tables(P({2, 2, 2, 4}), P({2, 8})), 10);
  EXPECT_EQ(*cf->max_d0, 8 * 8 + 2 * 2);
  const auto rep = analyze(Spectrum({0.3, 0.1, 0.05, 0.0}, {2, 2, 2, 4}), Spectrum({0.5, 0.0}, {2, 8}));
  EXPECT_EQ(rep.records.front().d0, 68);
}

TEST(ClosedFormCounts, GeneralCaseIsAbsent) {
  EXPECT_FALSE(closed_form_counts(P({1, 3, 4}), P({2, 6})));
  EXPECT_FALSE(closed_form_counts(P({2, 1}), P({2, 1})));
}

TEST(MolecularDimension, Formula) {
  const auto d = max_submanifold_dimension_molecular(10, 4, {1, 1});
  EXPECT_EQ(d.d0, 76);
  EXPECT_FALSE(d.warning);
  // Cross-check: theta margins (4, 6), rho margins (1, 1, 8), first row k_1i = n_i.
  EXPECT_EQ(dimension(T({{1, 1, 2}, {0, 0, 6}})), 76);

  const auto full = max_submanifold_dimension_molecular(7, 7, {1, 2});
  EXPECT_EQ(full.d0, 49);
  EXPECT_TRUE(full.warning);
}

TEST(MolecularDimension, EqualDegeneracyProjector) {
  // M = n: N^2 - 2(N - n) r n differs from (N-n)^2 + n^2 unless r = 1; for r = 1 they agree.
  for (int n = 1; n <= 3; ++n)
    for (int big = 2 * n + 1; big <= 12; ++big) {
      const auto d = max_submanifold_dimension_molecular(big, n, {n});
      EXPECT_EQ(d.d0, std::int64_t{big - n} * (big - n) + n * n);
    }
}
