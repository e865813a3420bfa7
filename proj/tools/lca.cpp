// Command-line front end: lca analyze|enumerate|count|verify|flow|perturb-compare.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "lca/cli.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lca::cli;

  CLI::App app{"Critical topology of quantum ensemble control landscapes"};
  app.require_subcommand(0, 1);

  std::string job_file, rho_arg, theta_arg, format = "json", out, random_sizes;
  std::uint64_t seed = 0;
  JobSpec job;

  app.add_option("--job", job_file, "JSON job file {command, rho, theta, seed, options}");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--rho", rho_arg, "rho spectrum: file or inline JSON");
    sub->add_option("--theta", theta_arg, "theta spectrum: file or inline JSON");
    sub->add_option("--seed", seed, "random seed (u64)");
    sub->add_option("--cluster-tol", job.cluster_tol, "tolerance for clustering diagonal entries");
    sub->add_option("--max-tables", job.max_tables, "cap on materialized tables");
    sub->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--out", out, "write the report to this path");
  };

  for (const char* name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (std::string(name) == "flow") {
      sub->add_option("--step0", job.step0, "initial step");
      sub->add_option("--grad-tol", job.grad_tol, "gradient-norm termination");
      sub->add_option("--max-iters", job.max_iters, "iteration cap per trajectory");
      sub->add_option("--starts", job.starts, "number of Haar random starts");
      sub->add_option("--max-saddle-starts", job.max_saddle_starts, "cap on saddle-perturbed starts");
    }
    if (std::string(name) == "perturb-compare") sub->add_option("--delta", job.delta, "eigenvalue splitting");
    if (std::string(name) == "verify") {
      sub->add_option("--max-n", job.max_n, "exhaustive corpus up to this N");
      sub->add_option("--random-pairs", job.random_pairs, "extra random margin pairs");
      sub->add_option("--random-sizes", random_sizes, "comma-separated N for random pairs (default 7,8)");
      sub->add_option("--value-trials", job.value_trials, "random value assignments per pair");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalidInput;
  }

  try {
    if (!job_file.empty()) {
      JobSpec from_file = job_from_json(load_json_argument(job_file));
      job = std::move(from_file);
      if (job.out.empty()) job.out = out;
    } else {
      if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitInvalidInput;
      }
      CLI::App* sub = app.get_subcommands().front();
      job.command = sub->get_name();
      if (!rho_arg.empty()) job.rho = load_json_argument(rho_arg);
      if (!theta_arg.empty()) job.theta = load_json_argument(theta_arg);
      if (sub->count("--seed")) job.seed = seed;
      job.format = format == "table" ? Format::table : Format::json;
      job.out = out;
      if (!random_sizes.empty()) job.random_sizes = parse_int_list(random_sizes);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  const RunResult res = run(job);
  if (res.generated_seed) std::cerr << "seed: " << *res.generated_seed << "\n";
  const std::string text = render(res, job.format);
  if (res.exit_code == kExitInvalidInput) std::cerr << res.text;
  if (job.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(job.out);
    if (!os) {
      std::cerr << "error: cannot write '" << job.out << "'\n";
      return kExitInvalidInput;
    }
    os << text;
  }
  return res.exit_code;
}
