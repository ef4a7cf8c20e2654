// Command-line front end: run scenario files or built-in scenarios, list the
// catalog, and run the acceptance suites.
//
// Exit codes:
//   0  clean run, all checks passed
//   1  acceptance criterion failed
//   2  usage error (bad flags, unknown builtin/suite)
//   3  scenario parse error
//   4  scenario invariant violation
//   5  QP infeasible during the run
//   6  instability flagged
#include <CLI11.hpp>

#include <rqp/accept.hpp>
#include <rqp/builtins.hpp>
#include <rqp/scenario_io.hpp>
#include <rqp/sim.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

enum ExitCode {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kParseError = 3,
  kInvariant = 4,
  kInfeasible = 5,
  kInstability = 6,
};

int run_one(rqp::Scenario s, const std::string& out_dir, double dt_override,
            double t_end_override) {
  if (dt_override > 0) s.dt = dt_override;
  if (t_end_override > 0) s.t_end = t_end_override;
  try {
    s.validate();
  } catch (const std::exception& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kInvariant;
  }
  const rqp::SimLog log = rqp::run_scenario(s);
  const rqp::Metrics m = rqp::compute_metrics(log, s.metrics.osc_window);
  std::filesystem::create_directories(out_dir);
  rqp::write_file(out_dir + "/" + s.id + ".csv", rqp::log_to_csv(log));
  rqp::write_file(out_dir + "/" + s.id + ".metrics.json", rqp::metrics_to_json(m));
  std::cout << s.id << ": steps=" << log.steps()
            << " settling_time=" << m.settling_time
            << " steady_state_error=" << m.steady_state_error
            << " oscillation_index=" << m.oscillation_index
            << " instability=" << (m.instability_flag ? "yes" : "no") << "\n";
  if (log.infeasible) {
    std::cerr << "QP infeasible at step " << log.infeasible_step << ", conflicting rows:";
    for (int r : log.conflict_rows) std::cerr << " " << r;
    std::cerr << "\n";
    return kInfeasible;
  }
  if (m.instability_flag) {
    std::cerr << "instability flagged\n";
    return kInstability;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"task-space QP control simulation runner"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = ".", builtin_name, suite;
  double dt_override = 0, t_end_override = 0;
  int seed_ignored = 0;

  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("file", scenario_path, "scenario file (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--dt", dt_override, "override control period [s]");
  run_cmd->add_option("--t-end", t_end_override, "override horizon [s]");
  run_cmd->add_option("--seed", seed_ignored, "ignored: runs are deterministic");

  auto* builtin_cmd = app.add_subcommand("builtin", "run a built-in scenario");
  builtin_cmd->add_option("name", builtin_name, "scenario name (see 'list')")->required();
  builtin_cmd->add_option("--out", out_dir, "output directory");
  builtin_cmd->add_option("--dt", dt_override, "override control period [s]");
  builtin_cmd->add_option("--t-end", t_end_override, "override horizon [s]");

  auto* list_cmd = app.add_subcommand("list", "list built-in scenarios");

  auto* check_cmd = app.add_subcommand("check", "run an acceptance suite");
  check_cmd->add_option("suite", suite, "1dof | qp-oracle | analysis | kinematics | planar | all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) {
      rqp::Scenario s;
      try {
        s = rqp::load_scenario_file(scenario_path);
      } catch (const rqp::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kParseError;
      } catch (const std::invalid_argument& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return kInvariant;
      }
      return run_one(std::move(s), out_dir, dt_override, t_end_override);
    }
    if (builtin_cmd->parsed()) {
      rqp::Scenario s;
      try {
        s = rqp::builtin_scenario(builtin_name);
      } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
      }
      return run_one(std::move(s), out_dir, dt_override, t_end_override);
    }
    if (list_cmd->parsed()) {
      for (const auto& name : rqp::builtin_names()) std::cout << name << "\n";
      return kOk;
    }
    if (check_cmd->parsed()) {
      std::vector<rqp::accept::CriterionResult> results;
      try {
        results = rqp::accept::run_suite(suite);
      } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
      }
      bool all_pass = true;
      for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %-36s %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        all_pass = all_pass && r.pass;
      }
      return all_pass ? kOk : kCheckFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  }
  return kUsage;
}
