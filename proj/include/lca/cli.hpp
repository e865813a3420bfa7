/**
 * @brief Job dispatch behind the `lca` command line.
 *
 * run() turns a JobSpec into an exit status and a report document. Exit 0
 * when every requested check passes, 1 on a failed check, 2 on invalid input.
 */
#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lca/error.hpp"
#include "lca/flow.hpp"
#include "lca/report_io.hpp"
#include "lca/spectra.hpp"
#include "lca/tables.hpp"
#include "lca/topology.hpp"
#include "lca/verify.hpp"

namespace lca::cli {

enum class Format { json, table };

struct JobSpec {
  std::string command;
  std::optional<Json> rho;
  std::optional<Json> theta;
  std::optional<std::uint64_t> seed;
  double cluster_tol = kDefaultClusterTol;
  std::uint64_t max_tables = kDefaultMaxTables;
  Format format = Format::json;
  std::string out;

  // flow
  std::optional<double> step0;
  std::optional<double> grad_tol;
  std::optional<std::int64_t> max_iters;
  std::size_t starts = 20;
  std::size_t max_saddle_starts = 64;

  // perturb-compare
  double delta = 1e-3;

  // verify
  int max_n = 6;
  std::size_t random_pairs = 0;
  std::vector<int> random_sizes{7, 8};
  std::size_t value_trials = 10;
};

struct RunResult {
  int exit_code = 0;
  Json document;
  std::string text;  // rendering for --format table
  /// Set when a seed had to be generated; the front end prints it.
  std::optional<std::uint64_t> generated_seed;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;

/// Accepts inline JSON (leading '{') or a path to a JSON file.
inline Json load_json_argument(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  std::string text;
  if (first != std::string::npos && arg[first] == '{') {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid JSON: ") + e.what());
  }
}

/// JobSpec from a job document: {"command", "rho", "theta", "seed", "options": {...}}.
inline JobSpec job_from_json(const Json& j) {
  JobSpec job;
  try {
    job.command = j.at("command").get<std::string>();
    if (j.contains("rho")) job.rho = j.at("rho");
    if (j.contains("theta")) job.theta = j.at("theta");
    if (j.contains("seed") && !j.at("seed").is_null()) job.seed = j.at("seed").get<std::uint64_t>();
    const Json opts = j.value("options", Json::object());
    job.cluster_tol = opts.value("cluster_tol", job.cluster_tol);
    job.max_tables = opts.value("max_tables", job.max_tables);
    if (opts.contains("format")) {
      const auto f = opts.at("format").get<std::string>();
      if (f != "json" && f != "table") throw Error(ErrorCode::InvalidArgument, "format must be json or table");
      job.format = f == "table" ? Format::table : Format::json;
    }
    job.out = opts.value("out", job.out);
    if (opts.contains("step0")) job.step0 = opts.at("step0").get<double>();
    if (opts.contains("grad_tol")) job.grad_tol = opts.at("grad_tol").get<double>();
    if (opts.contains("max_iters")) job.max_iters = opts.at("max_iters").get<std::int64_t>();
    job.starts = opts.value("starts", job.starts);
    job.max_saddle_starts = opts.value("max_saddle_starts", job.max_saddle_starts);
    job.delta = opts.value("delta", job.delta);
    job.max_n = opts.value("max_n", job.max_n);
    job.random_pairs = opts.value("random_pairs", job.random_pairs);
    job.random_sizes = opts.value("random_sizes", job.random_sizes);
    job.value_trials = opts.value("value_trials", job.value_trials);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed job: ") + e.what());
  }
  return job;
}

namespace detail {

inline Spectrum need_spectrum(const std::optional<Json>& j, const char* which, const JobSpec& job, bool margins_ok) {
  if (!j) throw Error(ErrorCode::InvalidArgument, std::string("--") + which + " is required for " + job.command);
  return spectrum_from_json(*j, job.cluster_tol, margins_ok);
}

inline void require_same_dim(const Spectrum& rho, const Spectrum& theta) {
  if (rho.dim() != theta.dim()) {
    throw Error(ErrorCode::MarginMismatch, "rho has N=" + std::to_string(rho.dim()) + " but theta has N=" +
                                               std::to_string(theta.dim()));
  }
}

inline Json seed_json(const std::optional<std::uint64_t>& s) { return s ? Json(*s) : Json(nullptr); }

inline std::uint64_t resolve_seed(JobSpec& job, RunResult& res) {
  if (!job.seed) {
    std::random_device rd;
    job.seed = (std::uint64_t{rd()} << 32) | rd();
    res.generated_seed = job.seed;
  }
  return *job.seed;
}

inline RunResult run_analyze(const JobSpec& job) {
  const Spectrum rho = need_spectrum(job.rho, "rho", job, false);
  const Spectrum theta = need_spectrum(job.theta, "theta", job, false);
  require_same_dim(rho, theta);
  const LandscapeReport rep = analyze(rho, theta, AnalyzeLimits{job.max_tables});
  RunResult res;
  res.document = report_to_json(rep);
  if (auto cf = closed_form_counts(degeneracy_profile(rho), degeneracy_profile(theta))) {
    res.document["closed_form"] = {{"case", std::string(to_string(cf->which))}, {"count", count_to_json(cf->count)}};
  }
  res.text = render_table(rep);
  return res;
}

inline RunResult run_enumerate(const JobSpec& job) {
  const Spectrum rho = need_spectrum(job.rho, "rho", job, true);
  const Spectrum theta = need_spectrum(job.theta, "theta", job, true);
  require_same_dim(rho, theta);
  const auto tables = enumerate_tables(degeneracy_profile(rho), degeneracy_profile(theta), job.max_tables);
  RunResult res;
  Json list = Json::array();
  std::ostringstream os;
  os << "rows " << margins_inline(rho.multiplicities()) << ", cols " << margins_inline(theta.multiplicities()) << ": "
     << tables.size() << " tables\n";
  for (const auto& k : tables) {
    list.push_back(table_to_json(k));
    os << table_inline(k) << "\n";
  }
  res.document = {{"n", rho.dim()},
                  {"margins", {{"rows", rho.multiplicities()}, {"cols", theta.multiplicities()}}},
                  {"count", tables.size()},
                  {"tables", std::move(list)}};
  res.text = os.str();
  return res;
}

inline RunResult run_count(const JobSpec& job) {
  const Spectrum rho = need_spectrum(job.rho, "rho", job, true);
  const Spectrum theta = need_spectrum(job.theta, "theta", job, true);
  require_same_dim(rho, theta);
  const BigCount c = count_tables(degeneracy_profile(rho), degeneracy_profile(theta));
  RunResult res;
  res.document = {{"n", rho.dim()},
                  {"margins", {{"rows", rho.multiplicities()}, {"cols", theta.multiplicities()}}},
                  {"count", count_to_json(c)}};
  if (auto cf = closed_form_counts(degeneracy_profile(rho), degeneracy_profile(theta))) {
    res.document["closed_form"] = {{"case", std::string(to_string(cf->which))}, {"count", count_to_json(cf->count)}};
  }
  res.text = c.str() + "\n";
  return res;
}

inline Json check_to_json(const CheckResult& c) {
  return Json{{"name", c.name},
              {"passed", c.passed()},
              {"cases", c.cases},
              {"mismatches", c.mismatches},
              {"first_failure", c.first_failure}};
}

inline RunResult run_verify(JobSpec job) {
  RunResult res;
  VerifySummary summary;
  Json corpus = {{"max_n", job.max_n}};
  if (job.rho || job.theta) {
    const Spectrum rho = need_spectrum(job.rho, "rho", job, true);
    const Spectrum theta = need_spectrum(job.theta, "theta", job, true);
    require_same_dim(rho, theta);
    VerifyOptions opt;
    opt.value_trials = job.value_trials;
    opt.seed = resolve_seed(job, res);
    summary = verify_pairs({{degeneracy_profile(rho), degeneracy_profile(theta)}}, opt);
    corpus = {{"pairs", summary.pairs}, {"rows", rho.multiplicities()}, {"cols", theta.multiplicities()}};
  } else {
    VerifyOptions opt;
    opt.max_n = job.max_n;
    opt.random_pairs = job.random_pairs;
    opt.random_sizes = job.random_sizes;
    opt.value_trials = job.value_trials;
    opt.seed = resolve_seed(job, res);
    summary = verify_corpus(opt);
    corpus = {{"max_n", job.max_n},
              {"random_pairs", job.random_pairs},
              {"random_sizes", job.random_sizes},
              {"pairs", summary.pairs}};
  }
  Json checks = Json::array();
  std::ostringstream os;
  for (const auto& c : summary.checks) {
    checks.push_back(check_to_json(c));
    os << (c.passed() ? "PASS " : "FAIL ") << c.name << " (" << c.cases << " cases";
    if (!c.passed()) os << ", " << c.mismatches << " mismatches, first at " << c.first_failure;
    os << ")\n";
  }
  res.document = {{"corpus", corpus}, {"checks", checks}, {"passed", summary.passed()}};
  res.text = os.str();
  res.exit_code = summary.passed() ? kExitOk : kExitCheckFailed;
  return res;
}

inline Json flow_params_json(const FlowParams& p) {
  return Json{{"step0", p.step0},
              {"shrink", p.shrink},
              {"grad_tol", p.grad_tol},
              {"max_iters", p.max_iters},
              {"reunit_every", p.reunit_every}};
}

inline RunResult run_flow(JobSpec job) {
  const Spectrum rho = need_spectrum(job.rho, "rho", job, false);
  const Spectrum theta = need_spectrum(job.theta, "theta", job, false);
  require_same_dim(rho, theta);
  RunResult res;
  AuditOptions opt;
  opt.seed = resolve_seed(job, res);
  opt.n_starts = job.starts;
  opt.max_saddle_starts = job.max_saddle_starts;
  opt.max_tables = job.max_tables;
  opt.params = default_flow_params(rho, theta);
  if (job.step0) opt.params.step0 = *job.step0;
  if (job.grad_tol) opt.params.grad_tol = *job.grad_tol;
  if (job.max_iters) opt.params.max_iters = *job.max_iters;
  const TrapAudit audit = trap_audit(rho, theta, opt);

  Json runs = Json::array();
  for (const auto& r : audit.runs) {
    Json jr = {{"start", std::string(to_string(r.start))},
               {"start_J", r.start_j},
               {"converged_to", r.converged_to},
               {"iterations", r.iterations},
               {"status", std::string(to_string(r.status))},
               {"final_grad_norm", r.final_grad_norm},
               {"reached_max", r.reached_max},
               {"level", r.level ? Json(*r.level) : Json(nullptr)}};
    if (r.saddle) jr["saddle_table"] = table_to_json(*r.saddle);
    runs.push_back(std::move(jr));
  }
  Json hist = Json::array();
  for (const auto& [lvl, cnt] : audit.histogram) hist.push_back({{"J", audit.levels[lvl]}, {"count", cnt}});
  const bool passed = audit.fraction_at_max_haar == 1.0 && audit.unmatched == 0;
  res.document = {{"profiles", {{"rho", spectrum_to_json(rho)}, {"theta", spectrum_to_json(theta)}}},
                  {"params", flow_params_json(opt.params)},
                  {"j_max", audit.j_max},
                  {"value_tol", audit.value_tol},
                  {"levels", audit.levels},
                  {"histogram", hist},
                  {"unmatched", audit.unmatched},
                  {"fraction_at_max_haar", audit.fraction_at_max_haar},
                  {"fraction_at_max_saddle", audit.fraction_at_max_saddle},
                  {"saddles_total", audit.saddles_total},
                  {"saddles_sampled", audit.saddles_sampled},
                  {"runs", runs},
                  {"passed", passed}};
  std::ostringstream os;
  os << "J_max = " << shortest(audit.j_max) << "\n"
     << "Haar starts reaching J_max: " << shortest(audit.fraction_at_max_haar) << "\n"
     << "saddle-perturbed starts reaching J_max: " << shortest(audit.fraction_at_max_saddle) << " ("
     << audit.saddles_sampled << " of " << audit.saddles_total << " saddles sampled)\n"
     << "converged values:\n";
  for (const auto& [lvl, cnt] : audit.histogram) os << "  J = " << shortest(audit.levels[lvl]) << ": " << cnt << "\n";
  if (audit.unmatched) os << "  unmatched: " << audit.unmatched << "\n";
  res.text = os.str();
  res.exit_code = passed ? kExitOk : kExitCheckFailed;
  return res;
}

inline Json extremum_json(const LandscapeReport& rep) {
  std::size_t dplus_zero = 0, dminus_zero = 0;
  std::int64_t max_d0 = 0, min_d0 = 0;
  for (const auto& r : rep.records) {
    if (r.dplus == 0) {
      ++dplus_zero;
      max_d0 = r.d0;
    }
    if (r.dminus == 0) {
      ++dminus_zero;
      min_d0 = r.d0;
    }
  }
  return Json{{"dplus_zero", dplus_zero}, {"dminus_zero", dminus_zero}, {"max_d0", max_d0}, {"min_d0", min_d0}};
}

inline RunResult run_perturb_compare(const JobSpec& job) {
  const Spectrum rho = need_spectrum(job.rho, "rho", job, false);
  const Spectrum theta = need_spectrum(job.theta, "theta", job, false);
  require_same_dim(rho, theta);
  const Spectrum rho_p = perturbed_spectrum(rho, job.delta);
  const Spectrum theta_p = perturbed_spectrum(theta, job.delta);
  const LandscapeReport before = analyze(rho, theta, AnalyzeLimits{job.max_tables});
  const LandscapeReport after = analyze(rho_p, theta_p, AnalyzeLimits{job.max_tables});

  const Json ex_before = extremum_json(before);
  const Json ex_after = extremum_json(after);
  BigCount n_fact = 1;
  for (int k = 2; k <= rho.dim(); ++k) n_fact *= k;
  const bool two_extrema =
      ex_after.at("dplus_zero").get<std::size_t>() == 1 && ex_after.at("dminus_zero").get<std::size_t>() == 1;
  const std::int64_t count_before = static_cast<std::int64_t>(before.summary.table_count);
  const std::int64_t count_after = static_cast<std::int64_t>(after.summary.table_count);

  RunResult res;
  res.document = {{"delta", job.delta},
                  {"original", report_to_json(before)},
                  {"perturbed", report_to_json(after)},
                  {"comparison",
                   {{"table_count_original", count_before},
                    {"table_count_perturbed", count_after},
                    {"table_count_delta", count_after - count_before},
                    {"n_factorial", count_to_json(n_fact)},
                    {"perturbed_count_is_n_factorial", BigCount(count_after) == n_fact},
                    {"extrema_original", ex_before},
                    {"extrema_perturbed", ex_after},
                    {"max_d0_delta", ex_after.at("max_d0").get<std::int64_t>() - ex_before.at("max_d0").get<std::int64_t>()},
                    {"min_d0_delta", ex_after.at("min_d0").get<std::int64_t>() - ex_before.at("min_d0").get<std::int64_t>()},
                    {"two_extrema_retained", two_extrema}}}};
  std::ostringstream os;
  os << "original:\n" << render_table(before) << "\nperturbed (delta=" << shortest(job.delta) << "):\n"
     << render_table(after) << "\ntable count " << count_before << " -> " << count_after << " (N! = " << n_fact.str()
     << ")\n"
     << "extrema retained: " << (two_extrema ? "exactly one maximum and one minimum" : "NO") << "\n";
  res.text = os.str();
  res.exit_code = two_extrema ? kExitOk : kExitCheckFailed;
  return res;
}

}  // namespace detail

inline constexpr const char* kCommands[] = {"analyze", "enumerate", "count", "verify", "flow", "perturb-compare"};

/**
 * Execute a job. Input errors become exit 2 with {"error": {"code", "message"}};
 * the returned document always carries "command" and "seed".
 */
inline RunResult run(JobSpec job) {
  RunResult res;
  try {
    if (job.command == "analyze") res = detail::run_analyze(job);
    else if (job.command == "enumerate") res = detail::run_enumerate(job);
    else if (job.command == "count") res = detail::run_count(job);
    else if (job.command == "verify") res = detail::run_verify(job);
    else if (job.command == "flow") res = detail::run_flow(job);
    else if (job.command == "perturb-compare") res = detail::run_perturb_compare(job);
    else throw Error(ErrorCode::InvalidArgument, "unknown command '" + job.command + "'");
  } catch (const Error& e) {
    res = RunResult{};
    res.exit_code = kExitInvalidInput;
    res.document = {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
    res.text = std::string("error: ") + e.what() + "\n";
  } catch (const Json::exception& e) {
    res = RunResult{};
    res.exit_code = kExitInvalidInput;
    res.document = {{"error", {{"code", "InvalidArgument"}, {"message", e.what()}}}};
    res.text = std::string("error: ") + e.what() + "\n";
  }
  if (res.generated_seed) job.seed = res.generated_seed;
  res.document["command"] = job.command;
  res.document["seed"] = detail::seed_json(job.seed);
  if (!res.document.contains("warnings")) res.document["warnings"] = Json::array();
  return res;
}

/// Text written to the output: pretty JSON, or the human rendering.
inline std::string render(const RunResult& res, Format format) {
  if (format == Format::table) return res.text;
  return res.document.dump(2) + "\n";
}

}  // namespace lca::cli
