#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lotus/bench/experiment.hpp"
#include "lotus/dual/dual.hpp"
#include "lotus/dual/trace_io.hpp"
#include "lotus/gen/generator.hpp"
#include "lotus/reduction/reduction.hpp"
#include "lotus/smip/instance_io.hpp"
#include "lotus/smip/production.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitSolverFailure = 3;

int cmd_solve(const std::string& instance_file, const std::string& method,
              double budget_s, double fraction, int ws_iters, long max_iters,
              std::uint64_t seed, const std::string& out_dir) {
  lotus::smip::ProductionInstance inst;
  try {
    inst = lotus::smip::load_instance(instance_file);
  } catch (const std::exception& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  if (method != "dd" && method != "lotus") {
    std::cerr << "unknown method: " << method << "\n";
    return kExitInvalidConfig;
  }
  if (budget_s <= 0.0 || fraction <= 0.0 || fraction > 1.0 || ws_iters < 0) {
    std::cerr << "invalid solve parameters\n";
    return kExitInvalidConfig;
  }

  try {
    const auto problem = lotus::smip::build_production_problem(inst);
    lotus::dual::RunConfig rc;
    rc.total_budget_s = budget_s;
    rc.fraction = fraction;
    rc.warm_start_iterations = ws_iters;
    if (max_iters > 0) rc.sub.max_iterations = max_iters;
    const lotus::dual::RunResult res =
        method == "dd" ? lotus::dual::run_dd(problem, rc)
                       : lotus::dual::run_lotus(problem, rc);

    fs::create_directories(out_dir);
    lotus::dual::save_trace(res.trace, (fs::path(out_dir) / "trace.csv").string());
    {
      std::ofstream sum(fs::path(out_dir) / "summary.txt");
      lotus::dual::write_summary(res, method, sum);
      sum << "seed " << seed << "\n";
    }
    std::cout << "z_primal " << res.z_primal << "\nz_dual " << res.z_dual << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

int cmd_generate(const std::string& config_file, std::uint64_t seed,
                 const std::string& out_file) {
  lotus::gen::GenConfig cfg;
  try {
    std::ifstream in(config_file);
    if (!in) throw lotus::gen::InvalidConfig("cannot open " + config_file);
    cfg = lotus::gen::parse_config(in);
    cfg.seed = seed;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  try {
    const auto inst = lotus::gen::generate(cfg);
    lotus::smip::save_instance(inst, out_file);
    std::ofstream manifest(out_file + ".manifest");
    lotus::gen::write_manifest(cfg, manifest);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "generation failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

int cmd_compare(const std::string& runs_dir, const std::string& out_file) {
  std::vector<lotus::bench::RunArtifact> artifacts;
  try {
    for (const auto& entry : fs::directory_iterator(runs_dir)) {
      if (!entry.is_directory()) continue;
      const fs::path trace_path = entry.path() / "trace.csv";
      const fs::path summary_path = entry.path() / "summary.txt";
      if (!fs::exists(trace_path) || !fs::exists(summary_path)) continue;

      lotus::bench::RunArtifact art;
      const std::string name = entry.path().filename().string();
      // Run directories are named <pair>_<method> by solve --out.
      const auto pos = name.rfind('_');
      if (pos == std::string::npos) continue;
      art.pair_id = name.substr(0, pos);
      art.method = name.substr(pos + 1);
      if (art.method != "dd" && art.method != "lotus") continue;

      art.trace = lotus::dual::load_trace(trace_path.string());
      std::ifstream sum(summary_path);
      std::string key;
      double value = 0.0;
      std::string line;
      while (std::getline(sum, line)) {
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        if (key == "z_primal" && ls >> value) {
          art.z_primal = -value;  // summaries store minimization values
          art.feasible = std::isfinite(value);
        } else if (key == "z_dual" && ls >> value) {
          art.z_dual = -value;
        }
      }
      artifacts.push_back(std::move(art));
    }
  } catch (const std::exception& e) {
    std::cerr << "invalid runs directory: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  if (artifacts.empty()) {
    std::cerr << "no run artifacts found in " << runs_dir << "\n";
    return kExitInvalidConfig;
  }
  try {
    const auto report = lotus::bench::compare_artifacts(artifacts);
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot open " + out_file);
    lotus::bench::write_report(report, out);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "comparison failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

int cmd_reduce(const std::string& instance_file, double fraction,
               const std::string& out_file) {
  lotus::smip::ProductionInstance inst;
  try {
    inst = lotus::smip::load_instance(instance_file);
    if (fraction <= 0.0 || fraction > 1.0)
      throw std::invalid_argument("fraction must be in (0,1]");
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  try {
    const auto problem = lotus::smip::build_production_problem(inst);
    const auto [reduced, result] = lotus::reduction::reduce(problem, fraction);
    (void)reduced;
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot open " + out_file);
    lotus::reduction::serialize_reduction(result, out);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "reduction failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-stage stochastic MIP toolkit"};
  app.require_subcommand(1);

  std::string instance_file, config_file, runs_dir, out_path, method = "dd";
  double budget_s = 60.0, fraction = 0.30;
  int ws_iters = 10;
  long max_iters = 0;
  std::uint64_t seed = 1;

  auto* solve = app.add_subcommand("solve", "run a solver on an instance");
  solve->add_option("--instance", instance_file)->required();
  solve->add_option("--method", method)->check(CLI::IsMember({"dd", "lotus"}));
  solve->add_option("--budget-s", budget_s);
  solve->add_option("--fraction", fraction);
  solve->add_option("--ws-iters", ws_iters);
  solve->add_option("--max-iters", max_iters, "iteration cap per phase; 0 means budget-only");
  solve->add_option("--seed", seed);
  solve->add_option("--out", out_path)->required();

  auto* generate = app.add_subcommand("generate", "generate a production instance");
  generate->add_option("--config", config_file)->required();
  generate->add_option("--seed", seed);
  generate->add_option("--out", out_path)->required();

  auto* compare = app.add_subcommand("compare", "build a comparison report from runs");
  compare->add_option("--runs", runs_dir)->required();
  compare->add_option("--out", out_path)->required();

  auto* reduce = app.add_subcommand("reduce", "scenario reduction standalone");
  reduce->add_option("--instance", instance_file)->required();
  reduce->add_option("--fraction", fraction);
  reduce->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalidConfig;
  }

  if (solve->parsed())
    return cmd_solve(instance_file, method, budget_s, fraction, ws_iters, max_iters, seed,
                     out_path);
  if (generate->parsed()) return cmd_generate(config_file, seed, out_path);
  if (compare->parsed()) return cmd_compare(runs_dir, out_path);
  return cmd_reduce(instance_file, fraction, out_path);
}
