/**
 * @brief Riemannian gradient ascent of J(U) = tr(U rho U^dagger theta) on U(N).
 *
 * Steps follow the curve U(s) = exp(i s A) U with the steepest-ascent
 * generator A* = i [U rho U^dagger, theta], along which dJ/ds at s = 0 equals
 * ||[theta, U rho U^dagger]||_F^2.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lca/error.hpp"
#include "lca/matcore.hpp"
#include "lca/oracle.hpp"
#include "lca/spectra.hpp"
#include "lca/tables.hpp"
#include "lca/topology.hpp"

namespace lca {

struct FlowParams {
  double step0 = 0.5;
  double shrink = 0.5;
  double grad_tol = 1e-9;
  std::int64_t max_iters = 100'000;
  std::int64_t reunit_every = 50;

  void validate() const {
    if (!(step0 > 0.0) || !(shrink > 0.0 && shrink < 1.0) || !(grad_tol > 0.0) || max_iters < 1 || reunit_every < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "flow params need step0 > 0, 0 < shrink < 1, grad_tol > 0, max_iters >= 1, reunit_every >= 1");
    }
  }
};

/// Default step: 0.5 / (||theta|| ||rho||) in spectral norm.
inline FlowParams default_flow_params(const Spectrum& rho, const Spectrum& theta) {
  FlowParams p;
  const double scale = rho.spectral_norm() * theta.spectral_norm();
  if (scale > 0.0) p.step0 = 0.5 / scale;
  return p;
}

enum class FlowStatus { converged, step_underflow, non_convergence };

inline std::string_view to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::step_underflow: return "step_underflow";
    case FlowStatus::non_convergence: return "non_convergence";
  }
  return "";
}

struct Trajectory {
  std::vector<double> j_series;
  UnitaryMatrix final_u;
  double final_grad_norm = 0.0;
  std::int64_t iterations = 0;
  double converged_to = 0.0;
  FlowStatus status = FlowStatus::converged;
  /// Largest ||U^dagger U - I||_F seen over the recorded iterates.
  double max_unitarity_defect = 0.0;
};

/// A* = i [U rho U^dagger, theta]; Hermitian, zero exactly on critical points.
inline ComplexMatrix gradient_generator(const UnitaryMatrix& u, const std::vector<double>& rho_diag,
                                        const std::vector<double>& theta_diag) {
  if (static_cast<int>(rho_diag.size()) != u.dim() || rho_diag.size() != theta_diag.size()) {
    throw Error(ErrorCode::DimensionMismatch, "diagonals do not match the unitary's dimension");
  }
  const ComplexMatrix x = u.matrix() * diagonal_matrix(rho_diag) * u.matrix().adjoint();
  return Complex(0, 1) * commutator(x, diagonal_matrix(theta_diag));
}

inline Trajectory ascend(const UnitaryMatrix& u0, const std::vector<double>& rho_diag,
                         const std::vector<double>& theta_diag, const FlowParams& params) {
  params.validate();
  Trajectory tr;
  ComplexMatrix u = u0.matrix();
  double j = landscape_at(u, rho_diag, theta_diag);
  tr.j_series.push_back(j);
  tr.max_unitarity_defect = unitarity_defect(u);
  const double min_step = params.step0 * 1e-14;

  tr.status = FlowStatus::non_convergence;
  for (;;) {
    const ComplexMatrix g = gradient_generator(UnitaryMatrix::repaired(u), rho_diag, theta_diag);
    tr.final_grad_norm = g.norm();
    if (tr.final_grad_norm <= params.grad_tol) {
      tr.status = FlowStatus::converged;
      break;
    }
    if (tr.iterations >= params.max_iters) {
      tr.status = FlowStatus::non_convergence;
      break;
    }
    const HermitianEigen eig = hermitian_eigen(g);
    double eta = params.step0;
    bool accepted = false;
    while (eta >= min_step) {
      ComplexMatrix trial = unitary_exp(eig, eta).matrix() * u;
      const double jt = landscape_at(trial, rho_diag, theta_diag);
      if (jt > j) {
        u = std::move(trial);
        j = jt;
        accepted = true;
        break;
      }
      eta *= params.shrink;
    }
    if (!accepted) {
      tr.status = FlowStatus::step_underflow;
      break;
    }
    ++tr.iterations;
    if (tr.iterations % params.reunit_every == 0) {
      u = reunitarize(u);
      j = landscape_at(u, rho_diag, theta_diag);
    }
    tr.j_series.push_back(j);
    tr.max_unitarity_defect = std::max(tr.max_unitarity_defect, unitarity_defect(u));
  }
  tr.final_u = UnitaryMatrix::repaired(reunitarize(u));
  tr.converged_to = j;
  return tr;
}

// ---------------------------------------------------------------------------
// Trap audit.

enum class StartKind { haar, saddle_perturbed };

inline std::string_view to_string(StartKind k) { return k == StartKind::haar ? "haar" : "saddle_perturbed"; }

struct AuditRun {
  StartKind start = StartKind::haar;
  std::optional<ContingencyTable> saddle;  // the saddle a perturbed start was drawn near
  double start_j = 0.0;
  double converged_to = 0.0;
  std::int64_t iterations = 0;
  FlowStatus status = FlowStatus::converged;
  double final_grad_norm = 0.0;
  bool reached_max = false;
  /// Index of the predicted level J(K) within tolerance of converged_to, if any.
  std::optional<std::size_t> level;
};

struct TrapAudit {
  double j_max = 0.0;
  double value_tol = 1e-6;
  std::vector<double> levels;  // distinct predicted J(K), descending
  std::vector<AuditRun> runs;
  /// Histogram of converged values keyed by level index; unmatched runs are counted separately.
  std::map<std::size_t, std::size_t> histogram;
  std::size_t unmatched = 0;
  double fraction_at_max_haar = 0.0;
  double fraction_at_max_saddle = 0.0;
  std::size_t saddles_total = 0;
  std::size_t saddles_sampled = 0;
};

struct AuditOptions {
  std::size_t n_starts = 20;
  std::uint64_t seed = 0;
  FlowParams params;
  double value_tol = 1e-6;
  double saddle_kick = 1e-3;
  /// Saddle-perturbed starts are drawn for at most this many saddle submanifolds (canonical order).
  std::size_t max_saddle_starts = 64;
  std::uint64_t max_tables = kDefaultMaxTables;
};

/**
 * Runs ascend from n_starts Haar starts, plus one start near each saddle
 * permutation (pi times exp(i H) with ||H||_F = saddle_kick), and tallies
 * the values they land on against the predicted J(K) levels.
 */
inline TrapAudit trap_audit(const Spectrum& rho, const Spectrum& theta, const AuditOptions& opt) {
  if (opt.n_starts < 1) throw Error(ErrorCode::InvalidArgument, "trap audit needs at least one start");
  opt.params.validate();
  const LandscapeReport report = analyze(rho, theta, AnalyzeLimits{opt.max_tables});
  const auto rho_d = rho.expanded();
  const auto theta_d = theta.expanded();
  const int n = rho.dim();

  TrapAudit audit;
  audit.j_max = report.summary.j_max;
  audit.value_tol = opt.value_tol;
  for (const auto& rec : report.records) {
    if (audit.levels.empty() || std::abs(audit.levels.back() - rec.j) > 0.0) audit.levels.push_back(rec.j);
  }

  std::vector<ContingencyTable> saddles;
  for (const auto& rec : report.records)
    if (rec.kind == Kind::saddle) saddles.push_back(rec.table);
  std::sort(saddles.begin(), saddles.end());
  audit.saddles_total = saddles.size();
  if (saddles.size() > opt.max_saddle_starts) saddles.resize(opt.max_saddle_starts);
  audit.saddles_sampled = saddles.size();

  const Rng root(opt.seed);
  auto classify_run = [&](AuditRun& run) {
    run.reached_max = std::abs(run.converged_to - audit.j_max) <= opt.value_tol;
    for (std::size_t l = 0; l < audit.levels.size(); ++l) {
      if (std::abs(run.converged_to - audit.levels[l]) <= opt.value_tol) {
        run.level = l;
        break;
      }
    }
  };
  auto finish = [&](AuditRun run, const UnitaryMatrix& u0) {
    run.start_j = landscape_at(u0.matrix(), rho_d, theta_d);
    const Trajectory t = ascend(u0, rho_d, theta_d, opt.params);
    run.converged_to = t.converged_to;
    run.iterations = t.iterations;
    run.status = t.status;
    run.final_grad_norm = t.final_grad_norm;
    classify_run(run);
    audit.runs.push_back(std::move(run));
  };

  for (std::size_t k = 0; k < opt.n_starts; ++k) {
    Rng rng = root.split(k);
    finish(AuditRun{}, random_unitary(n, rng));
  }
  for (std::size_t k = 0; k < saddles.size(); ++k) {
    Rng rng = root.split(opt.n_starts + k);
    AuditRun run;
    run.start = StartKind::saddle_perturbed;
    run.saddle = saddles[k];
    const UnitaryMatrix kick = unitary_exp(random_hermitian(n, rng, opt.saddle_kick), 1.0);
    finish(std::move(run), permutation_matrix(permutation_of_table(saddles[k])) * kick);
  }

  std::size_t haar_hits = 0, saddle_hits = 0, saddle_runs = 0;
  for (const auto& run : audit.runs) {
    if (run.level) ++audit.histogram[*run.level];
    else ++audit.unmatched;
    if (run.start == StartKind::haar) {
      haar_hits += run.reached_max;
    } else {
      ++saddle_runs;
      saddle_hits += run.reached_max;
    }
  }
  audit.fraction_at_max_haar = double(haar_hits) / double(opt.n_starts);
  audit.fraction_at_max_saddle = saddle_runs ? double(saddle_hits) / double(saddle_runs) : 1.0;
  return audit;
}

}  // namespace lca
