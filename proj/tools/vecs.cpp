#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "vecs/engine.hpp"
#include "vecs/errors.hpp"
#include "vecs/harness.hpp"
#include "vecs/replay.hpp"
#include "vecs/workload.hpp"

namespace fs = std::filesystem;
using namespace vecs;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kInternal = 3;

struct CfgOptions {
  std::string config_file;
  std::vector<std::string> settings;
  std::optional<double> u_hat_max;
  std::optional<double> d_hat_max;

  void add(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "key=value config file");
    cmd->add_option("--set", settings, "override one config key (key=value)");
    cmd->add_option("--u-hat-max", u_hat_max, "global-mode load cap, fraction of U^max");
    cmd->add_option("--d-hat-max", d_hat_max, "offload radius");
  }

  void apply(VecsConfig& cfg) const {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ParseError("cannot open config " + config_file);
      cfg = read_config(in, cfg);
    }
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (u_hat_max) cfg.u_hat_max = *u_hat_max;
    if (d_hat_max) cfg.d_hat_max = *d_hat_max;
    cfg.validate();
  }
};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario " + path);
  return read_scenario(in);
}

void save_scenario(const Scenario& s, const std::string& path) {
  if (path.empty() || path == "-") {
    write_scenario(std::cout, s);
  } else {
    auto out = open_out(path);
    write_scenario(out, s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vecs: mixed-criticality task offloading simulator"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic scenario");
  GeneratorParams gp = figure_base_params();
  std::string slack = "normal", rho = "1:1", gen_out;
  CfgOptions gen_cfg;
  gen->add_option("--n-tasks", gp.n_tasks, "number of tasks");
  gen->add_option("--n-bs", gp.n_bs, "number of base stations");
  gen->add_option("--n-avs", gp.n_avs, "number of vehicles (0: half the tasks)");
  gen->add_option("--arrival-max", gp.arrival_max, "latest arrival time");
  gen->add_option("--p-min", gp.p_min, "minimum processing time");
  gen->add_option("--p-max", gp.p_max, "maximum processing time");
  gen->add_option("--slack", slack, "tight|normal|loose|mixed");
  gen->add_option("--rho", rho, "hard:soft ratio");
  gen->add_option("--seed", gp.seed, "generator seed");
  gen->add_option("--out", gen_out, "scenario file (stdout when omitted)");
  gen_cfg.add(gen);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "build a scenario from task and location traces");
  ScalingParams sp;
  sp.cfg = figure_base_params().cfg;
  std::string task_file, location_file, ingest_out, ingest_rho = "1:1", ingest_slack;
  CfgOptions ingest_cfg;
  ingest->add_option("--tasks", task_file, "task trace CSV")->required();
  ingest->add_option("--locations", location_file, "location trace CSV")->required();
  ingest->add_option("--n-tasks", sp.n_tasks, "tasks to take");
  ingest->add_option("--n-bs", sp.n_bs, "stations to take");
  ingest->add_option("--t-max", sp.t_max, "time range after scaling");
  ingest->add_option("--rho", ingest_rho, "hard:soft ratio");
  ingest->add_option("--slack", ingest_slack, "re-derive deadlines into this slack class");
  ingest->add_option("--seed", sp.seed, "seed for flags and slack re-derivation");
  ingest->add_option("--map-arrival", sp.mapping.arrival, "arrival column");
  ingest->add_option("--map-processing", sp.mapping.processing, "processing column");
  ingest->add_option("--map-deadline", sp.mapping.deadline, "deadline column");
  ingest->add_option("--map-longitude", sp.mapping.longitude, "longitude column");
  ingest->add_option("--map-latitude", sp.mapping.latitude, "latitude column");
  ingest->add_option("--out", ingest_out, "scenario file (stdout when omitted)");
  ingest_cfg.add(ingest);

  // run
  auto* run_cmd = app.add_subcommand("run", "simulate one scenario under one policy");
  std::string scenario_file, policy_name = "dynamic_holding", run_dir;
  CfgOptions run_cfg;
  run_cmd->add_option("--scenario", scenario_file, "scenario file")->required();
  run_cmd->add_option("--policy", policy_name, "selfish_holding|nearest|dynamic_holding|baruah_baseline");
  run_cmd->add_option("--out-dir", run_dir, "write report.txt and events.csv here (stdout report when omitted)");
  run_cmd->add_option("--config", run_cfg.config_file, "key=value config file applied over the scenario's");
  run_cmd->add_option("--set", run_cfg.settings, "override one config key (key=value)");
  run_cmd->add_option("--u-hat-max", run_cfg.u_hat_max, "global-mode load cap, fraction of U^max");
  run_cmd->add_option("--d-hat-max", run_cfg.d_hat_max, "offload radius");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "run an experiment matrix");
  std::string plan_file, preset, plan_dir = "results";
  std::optional<std::uint64_t> plan_seed;
  std::optional<std::int64_t> plan_reps;
  unsigned jobs = 1;
  CfgOptions plan_cfg;
  auto* plan_opt = plan_cmd->add_option("--plan-file", plan_file, "plan file");
  auto* preset_opt = plan_cmd->add_option("--preset", preset, "fig6..fig12 or hyper");
  plan_opt->excludes(preset_opt);
  plan_cmd->add_option("--seed", plan_seed, "base seed");
  plan_cmd->add_option("--seeds", plan_reps, "repetitions per cell");
  plan_cmd->add_option("--jobs", jobs, "worker threads");
  plan_cmd->add_option("--out-dir", plan_dir, "output directory");
  plan_cmd->add_option("--set", plan_cfg.settings, "override one config key (key=value)");
  plan_cmd->add_option("--u-hat-max", plan_cfg.u_hat_max, "global-mode load cap, fraction of U^max");
  plan_cmd->add_option("--d-hat-max", plan_cfg.d_hat_max, "offload radius");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "emit per-policy series for a figure");
  std::string results_file, figure, plot_dir = "plot";
  plot->add_option("--results", results_file, "results CSV from plan")->required();
  plot->add_option("--figure", figure, "fig6..fig12")->required();
  plot->add_option("--out-dir", plot_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      gp.slack = parse_slack_target(slack);
      gp.ratio = parse_ratio(rho);
      gen_cfg.apply(gp.cfg);
      save_scenario(generate_synthetic(gp), gen_out);
    } else if (*ingest) {
      sp.ratio = parse_ratio(ingest_rho);
      if (!ingest_slack.empty()) sp.slack = parse_slack_target(ingest_slack);
      ingest_cfg.apply(sp.cfg);
      sp.grid_size = sp.cfg.grid_size;
      std::ifstream tasks(task_file);
      if (!tasks) throw IngestionError("cannot open " + task_file);
      std::ifstream locations(location_file);
      if (!locations) throw IngestionError("cannot open " + location_file);
      IngestReport report;
      save_scenario(ingest_trace(tasks, locations, sp, &report), ingest_out);
      std::cerr << "malformed_task_records=" << report.malformed_task_records << '\n'
                << "malformed_location_records=" << report.malformed_location_records << '\n'
                << "processing_clamped=" << report.processing_clamped << '\n'
                << "invalid_after_scaling=" << report.invalid_after_scaling << '\n';
    } else if (*run_cmd) {
      Scenario s = load_scenario(scenario_file);
      run_cfg.apply(s.cfg);
      const PolicyId policy = parse_policy(policy_name);
      const RunReport report = run(s, policy);
      if (run_dir.empty()) {
        write_report(std::cout, report);
      } else {
        auto out = open_out(fs::path(run_dir) / "report.txt");
        write_report(out, report);
        auto log = open_out(fs::path(run_dir) / "events.csv");
        report.log.write(log);
      }
      const AuditReport audit_report = audit(s, report.log, policy != PolicyId::kBaruahBaseline);
      if (!audit_report.ok()) {
        for (const auto& v : audit_report.violations) std::cerr << "violation: " << v << '\n';
        return kInternal;
      }
    } else if (*plan_cmd) {
      if (plan_file.empty() && preset.empty()) throw ConfigError("plan needs --plan-file or --preset");
      const fs::path dir(plan_dir);
      if (preset == "hyper") {
        HyperStudyParams hp;
        hp.base = figure_base_params();
        plan_cfg.apply(hp.base.cfg);
        if (plan_seed) hp.base_seed = *plan_seed;
        if (plan_reps) hp.repetitions = *plan_reps;
        const HyperStudyResult study = hyperparameter_study(hp, jobs);
        auto d = open_out(dir / "distance_tradeoff.csv");
        write_distance_tradeoff(d, study);
        auto u = open_out(dir / "energy_tradeoff.csv");
        write_energy_tradeoff(u, study);
        return kOk;
      }
      ExperimentPlan plan;
      if (!preset.empty()) {
        plan = preset_plan(preset);
      } else {
        std::ifstream in(plan_file);
        if (!in) throw ParseError("cannot open plan " + plan_file);
        plan = read_plan(in);
      }
      plan_cfg.apply(plan.base.cfg);
      if (plan_seed) plan.base_seed = *plan_seed;
      if (plan_reps) plan.repetitions = *plan_reps;
      const ResultTable table = run_plan(plan, jobs);
      auto p = open_out(dir / "plan.txt");
      write_plan(p, plan);
      auto r = open_out(dir / "results.csv");
      write_results_csv(r, table);
      auto t = open_out(dir / "timings.csv");
      write_timings_csv(t, table);
    } else if (*plot) {
      figure_spec(figure);
      std::ifstream in(results_file);
      if (!in) throw ParseError("cannot open results " + results_file);
      for (const auto& path : emit_plot_data(read_results_csv(in), figure, plot_dir)) {
        std::cout << path.string() << '\n';
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InternalFault& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const ContractViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const LedgerCorruptionError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  }
  return kOk;
}
