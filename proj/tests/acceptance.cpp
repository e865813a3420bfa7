// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "lca/lca.hpp"

using namespace lca;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

BigCount factorial(int n) {
  BigCount f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Permutation random_permutation(int n, Rng& rng) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  std::shuffle(m.begin(), m.end(), rng.engine());
  return Permutation(m);
}

std::string str(const std::vector<int>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

// 1. Five-record report for rho (1,3,4), theta (2,6).
Outcome eight_level_report() {
  Outcome out;
  const auto t0 = Clock::now();
  const LandscapeReport rep = analyze(Spectrum({0.4, 0.1, 0.075}, {1, 3, 4}), Spectrum({1.0, 0.0}, {2, 6}));
  const double dt = seconds_since(t0);
  using Row = std::tuple<std::int64_t, std::int64_t, std::int64_t, Kind>;
  const std::multiset<Row> expected{{48, 16, 0, Kind::minimum},
                                    {50, 8, 6, Kind::saddle},
                                    {46, 6, 12, Kind::saddle},
                                    {44, 4, 16, Kind::saddle},
                                    {44, 0, 20, Kind::maximum}};
  std::multiset<Row> got;
  for (const auto& r : rep.records) got.insert({r.d0, r.dplus, r.dminus, r.kind});
  if (rep.records.size() != 5) out.fail("record count " + std::to_string(rep.records.size()));
  if (got != expected) out.fail("index triples differ");
  if (dt >= 1.0) out.fail("runtime " + std::to_string(dt) + " s");
  return out;
}

// 2. Three-level report and the swap table.
Outcome three_level_report() {
  Outcome out;
  const auto k = table_of_permutation(Permutation({0, 2, 1}), DegeneracyProfile({1, 2}), DegeneracyProfile({2, 1}));
  if (k != ContingencyTable::from_rows({{1, 0}, {1, 1}})) out.fail("swap table differs");
  const LandscapeReport rep = analyze(build_spectrum({0.4, 0.3, 0.3}), build_spectrum({0.4, 0.4, 0.2}));
  if (rep.records.size() != 2) out.fail("record count " + std::to_string(rep.records.size()));
  if (std::abs(rep.summary.j_max - 0.34) > 1e-12) out.fail("J_max");
  if (std::abs(rep.summary.j_min - 0.32) > 1e-12) out.fail("J_min");
  if (!rep.records.empty() && rep.records.front().table != k) out.fail("maximum table differs");
  return out;
}

// 3. Closed-form counts against count_tables.
Outcome closed_forms() {
  Outcome out;
  const auto t0 = Clock::now();
  Rng rng(303);

  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const DegeneracyProfile rho({1, n - 1});
    const DegeneracyProfile theta(random_composition(n, rng));
    const auto& m = theta.margins;
    const BigCount c = count_tables(rho, theta);
    if (c != BigCount(m.size())) out.fail("pure state count " + str(m));
    const auto tables = enumerate_tables(rho, theta);
    for (const auto& k : tables) {
      int j = 0;
      while (k(0, j) == 0) ++j;
      std::int64_t before = 0, after = 0;
      for (int l = 0; l < j; ++l) before += m[l];
      for (int l = j + 1; l < static_cast<int>(m.size()); ++l) after += m[l];
      const Signature sig = signature(k);
      if (dimension(k) != std::int64_t{n} * (n - 2) + 2 * m[j] || sig.dplus != 2 * before || sig.dminus != 2 * after) {
        out.fail("pure state indices " + str(m));
      }
    }
    const auto cf = closed_form_counts(rho, theta);
    if (!cf || cf->count != c) out.fail("pure state detection " + str(m));
  }

  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const DegeneracyProfile rho(random_composition(n, rng));
    const DegeneracyProfile theta(std::vector<int>(n, 1));
    BigCount expect = factorial(n);
    for (int v : rho.margins) expect /= factorial(v);
    const BigCount c = count_tables(rho, theta);
    if (c != expect) out.fail("non-degenerate observable count " + str(rho.margins));
    const auto cf = closed_form_counts(rho, theta);
    if (!cf || cf->count != c) out.fail("non-degenerate observable detection " + str(rho.margins));
  }

  for (int trial = 0; trial < 10; ++trial) {
    const int r = 1 + static_cast<int>(rng.below(3));
    std::vector<int> rows;
    int s = 0;
    for (int i = 0; i < r; ++i) {
      rows.push_back(1 + static_cast<int>(rng.below(3)));
      s += rows.back();
    }
    const int m_top = s + static_cast<int>(rng.below(3));
    const int m_bottom = s + static_cast<int>(rng.below(3));
    rows.push_back(m_top + m_bottom - s);
    BigCount expect = 1;
    for (int i = 0; i < r; ++i) expect *= rows[i] + 1;
    const DegeneracyProfile rho(rows), theta({m_top, m_bottom});
    const BigCount c = count_tables(rho, theta);
    if (c != expect) out.fail("molecular two-row count " + str(rows));
    const auto cf = closed_form_counts(rho, theta);
    if (!cf || cf->count != c) out.fail("molecular two-row detection " + str(rows));
  }

  for (int trial = 0; trial < 10; ++trial) {
    const int np = 1 + static_cast<int>(rng.below(3));
    const int r = 1 + static_cast<int>(rng.below(4));
    const int n0 = np + static_cast<int>(rng.below(3));
    std::vector<int> rows(static_cast<std::size_t>(r), np);
    rows.push_back(n0);
    const int n = r * np + n0;
    const DegeneracyProfile rho(rows), theta({np, n - np});
    const BigCount expect = factorial(np + r) / (factorial(np) * factorial(r));
    const BigCount c = count_tables(rho, theta);
    if (c != expect) out.fail("molecular projector count " + str(rows));
    const auto cf = closed_form_counts(rho, theta);
    if (!cf || cf->count != c) out.fail("molecular projector detection " + str(rows));
  }

  const double dt = seconds_since(t0);
  if (dt >= 10.0) out.fail("runtime " + std::to_string(dt) + " s");
  return out;
}

std::vector<MarginPair> oracle_corpus() {
  Rng rng = Rng(404).split(0);
  auto corpus = exhaustive_corpus(6);
  for (auto& mp : random_corpus({7, 8}, 30, rng)) corpus.push_back(std::move(mp));
  return corpus;
}

Outcome check_named(const VerifySummary& s, const std::set<std::string>& names) {
  Outcome out;
  for (const auto& c : s.checks) {
    if (!names.count(c.name)) continue;
    if (!c.passed()) out.fail(c.name + ": " + std::to_string(c.mismatches) + " mismatches, first " + c.first_failure);
  }
  return out;
}

// 6. P pi Q is critical with the table's value.
Outcome double_coset_points() {
  Outcome out;
  Rng rng(606);
  double worst_res = 0.0, worst_val = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const int n = 3 + sample % 6;
    const DegeneracyProfile rows(random_composition(n, rng)), cols(random_composition(n, rng));
    const Spectrum rho(random_decreasing(rows.parts(), rng), rows.margins);
    const Spectrum theta(random_decreasing(cols.parts(), rng), cols.margins);
    const Permutation pi = random_permutation(n, rng);
    const auto cp = random_critical_point(pi, rows, cols, 6000 + sample);
    const auto rd = rho.expanded(), td = theta.expanded();
    worst_res = std::max(worst_res, commutator_residual(cp.u, rd, td));
    const ComplexMatrix x = cp.u.matrix() * diagonal_matrix(rd) * cp.u.matrix().adjoint();
    const double j = (x * diagonal_matrix(td)).trace().real();
    worst_val = std::max(worst_val, std::abs(j - landscape_value(table_of_permutation(pi, rows, cols), rho, theta)));
  }
  if (worst_res > 1e-10) out.fail("residual " + std::to_string(worst_res));
  if (worst_val > 1e-10) out.fail("value error " + std::to_string(worst_val));
  return out;
}

// 7. First- and second-order finite differences.
Outcome gradient_checks() {
  Outcome out;
  Rng rng(707);
  auto j_along = [](const ComplexMatrix& a, const ComplexMatrix& u, double s, const std::vector<double>& rd,
                    const std::vector<double>& td) { return landscape_at(unitary_exp(a, s).matrix() * u, rd, td); };
  double worst1 = 0.0, worst2 = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    // A single-level spectrum has an identically zero gradient; draw profiles with at least two levels.
    std::vector<int> rm, cm;
    do rm = random_composition(n, rng);
    while (rm.size() < 2);
    do cm = random_composition(n, rng);
    while (cm.size() < 2);
    const DegeneracyProfile rows(rm), cols(cm);
    const auto rd = Spectrum(random_decreasing(rows.parts(), rng), rows.margins).expanded();
    const auto td = Spectrum(random_decreasing(cols.parts(), rng), cols.margins).expanded();

    const auto u = random_unitary(n, rng);
    const ComplexMatrix a = gradient_generator(u, rd, td);
    const ComplexMatrix x = u.matrix() * diagonal_matrix(rd) * u.matrix().adjoint();
    const double expect = std::pow(commutator(diagonal_matrix(td), x).norm(), 2);
    const double j0 = landscape_at(u.matrix(), rd, td);
    auto d = [&](double s) { return (j_along(a, u.matrix(), s, rd, td) - j0) / s; };
    const double rich = (10 * d(1e-5) - d(1e-4)) / 9;
    worst1 = std::max(worst1, std::abs(rich - expect) / expect);

    const auto pu = permutation_matrix(random_permutation(n, rng));
    const double pj = landscape_at(pu.matrix(), rd, td);
    for (int b = 0; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        for (bool im : {false, true}) {
          const ComplexMatrix e = elementary_direction(n, b, c, im);
          const double h = hessian_form_value(e, pu, rd, td);
          auto s2 = [&](double t) {
            return (j_along(e, pu.matrix(), t, rd, td) + j_along(e, pu.matrix(), -t, rd, td) - 2 * pj) / (2 * t * t);
          };
          const double fd = (4 * s2(5e-3) - s2(1e-2)) / 3;
          // Zero coefficients are compared on the scale of the largest eigenvalue product.
          const double scale = std::max(std::abs(h), 1e-3);
          worst2 = std::max(worst2, std::abs(fd - h) / scale);
        }
      }
    }
  }
  if (worst1 > 1e-4) out.fail("first-order relative error " + std::to_string(worst1));
  if (worst2 > 1e-6) out.fail("second-order relative error " + std::to_string(worst2));
  return out;
}

// 8. Every Haar start reaches J_max; every run lands on a predicted level.
Outcome trap_freeness() {
  Outcome out;
  const auto t0 = Clock::now();
  const std::vector<std::pair<Spectrum, Spectrum>> profiles{
      {Spectrum({1.0, 0.0}, {1, 1}), Spectrum({1.0, 0.0}, {1, 1})},
      {Spectrum({0.4, 0.3}, {1, 2}), Spectrum({0.4, 0.2}, {2, 1})},
      {Spectrum({0.5, 0.3, 0.2}, {1, 1, 1}), Spectrum({1.0, 0.0, -1.0}, {1, 1, 1})},
      {Spectrum({0.4, 0.1}, {2, 2}), Spectrum({1.0, 0.5, 0.0}, {1, 2, 1})},
      {Spectrum({0.4, 0.1, 0.075}, {1, 3, 4}), Spectrum({1.0, 0.0}, {2, 6})}};
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& [rho, theta] = profiles[i];
    AuditOptions opt;
    opt.n_starts = 20;
    opt.seed = 800 + i;
    opt.params = default_flow_params(rho, theta);
    const TrapAudit audit = trap_audit(rho, theta, opt);
    const std::string label = str(rho.multiplicities()) + " x " + str(theta.multiplicities());
    if (audit.fraction_at_max_haar != 1.0) out.fail(label + ": Haar fraction " + std::to_string(audit.fraction_at_max_haar));
    if (audit.unmatched != 0) out.fail(label + ": " + std::to_string(audit.unmatched) + " unmatched runs");
  }
  const double dt = seconds_since(t0);
  if (dt >= 300.0) out.fail("runtime " + std::to_string(dt) + " s");
  return out;
}

// 9. Perturbation lifts the count to N! and keeps two extrema.
Outcome perturbation() {
  Outcome out;
  cli::JobSpec job;
  job.command = "perturb-compare";
  job.rho = Json{{"distinct", {0.4, 0.3}}, {"multiplicities", {1, 2}}};
  job.theta = Json{{"distinct", {0.4, 0.2}}, {"multiplicities", {2, 1}}};
  job.delta = 1e-3;
  const auto res = cli::run(job);
  if (res.exit_code != 0) out.fail("exit code " + std::to_string(res.exit_code));
  if (!res.document.contains("comparison")) {
    out.fail("no comparison");
    return out;
  }
  const auto& c = res.document.at("comparison");
  if (c.at("table_count_original").get<int>() != 2) out.fail("original count");
  if (c.at("table_count_perturbed").get<int>() != 6) out.fail("perturbed count");
  if (!c.at("two_extrema_retained").get<bool>()) out.fail("extrema not retained");
  return out;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("criterion %d %-34s %s (%.2f s)%s%s\n", id, name, o.ok ? "PASS" : "FAIL", seconds_since(t0),
                o.ok ? "" : " ", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  };

  report(1, "eight-level report", eight_level_report);
  report(2, "three-level report", three_level_report);
  report(3, "closed-form counts", closed_forms);

  VerifySummary summary;
  const auto t4 = Clock::now();
  double corpus_seconds = 0.0;
  std::size_t pairs = 0;
  try {
    VerifyOptions opt;
    opt.value_trials = 100;
    opt.seed = 404;
    const auto corpus = oracle_corpus();
    pairs = corpus.size();
    summary = verify_pairs(corpus, opt);
  } catch (const std::exception& e) {
    std::printf("corpus run failed: %s\n", e.what());
  }
  corpus_seconds = seconds_since(t4);
  std::printf("oracle corpus: %zu margin pairs in %.2f s\n", pairs, corpus_seconds);
  report(4, "oracle equivalence", [&] {
    Outcome o = check_named(summary, {"enumeration_equals_brute_force", "permutation_numeric_signature"});
    if (summary.checks.empty()) o.fail("corpus did not run");
    if (corpus_seconds >= 120.0) o.fail("runtime " + std::to_string(corpus_seconds) + " s");
    return o;
  });
  report(5, "structural invariants", [&] {
    Outcome o = check_named(summary, {"index_sum_is_n_squared", "unique_extrema", "identity_table_is_maximum",
                                          "maximum_attains_largest_value"});
    if (summary.checks.empty()) o.fail("corpus did not run");
    return o;
  });

  report(6, "double coset critical points", double_coset_points);
  report(7, "gradient finite differences", gradient_checks);
  report(8, "trap-freeness", trap_freeness);
  report(9, "perturbation comparison", perturbation);

  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
