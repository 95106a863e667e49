#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vecs/engine.hpp"
#include "vecs/workload.hpp"

namespace vecs {

enum class Axis : std::uint8_t { kNTasks, kNBs, kSlack, kRho, kDHatMax, kUHatMax, kGrid };

const char* to_string(Axis axis);
Axis parse_axis(const std::string& text);

/// Where scenario tasks come from when the plan is trace-driven.
struct TraceSource {
  std::filesystem::path task_file;
  std::filesystem::path location_file;
  TraceMapping mapping;
  Time t_max = 2000;
};

struct ExperimentPlan {
  std::string name = "plan";
  Axis axis = Axis::kNTasks;
  std::vector<std::string> values;
  std::vector<PolicyId> policies;
  std::int64_t repetitions = 1;
  std::uint64_t base_seed = 1;
  /// Fixed workload parameters; the axis overrides one of them per cell.
  GeneratorParams base;
  std::optional<TraceSource> trace;

  /// Throws ConfigError naming the offending axis value or field.
  void validate() const;
};

/// Plan file: `key=value` lines. Keys: name, axis, values, policies, seeds,
/// base_seed, n_tasks, n_bs, n_avs, arrival_max, p_min, p_max, slack, rho,
/// trace.tasks, trace.locations, trace.t_max, trace.map.<field>, and
/// cfg.<VecsConfig key>.
ExperimentPlan read_plan(std::istream& in);
void write_plan(std::ostream& out, const ExperimentPlan& plan);

/// Workload shared by the figure presets and the hyperparameter study:
/// small per-station capacity so the swept task counts contend.
GeneratorParams figure_base_params();

/// Built-in plans for the figure analogues: fig6 .. fig12.
ExperimentPlan preset_plan(const std::string& figure_id);
std::vector<std::string> preset_names();

/// Scenario for one plan cell.
Scenario build_scenario(const ExperimentPlan& plan, const std::string& axis_value,
                        std::uint64_t seed);

struct ResultRow {
  std::string axis_value;
  PolicyId policy = PolicyId::kDynamicHolding;
  /// Empty for aggregate (mean) rows.
  std::optional<std::uint64_t> seed;
  double c_drop = 0.0;
  double c_e = 0.0;
  double c_dis = 0.0;
  double c_total = 0.0;
  double completed_hard = 0.0;
  double completed_soft = 0.0;
  double dropped_hard = 0.0;
  double dropped_soft = 0.0;
  double cloud = 0.0;
  /// Penalty of dropping every task in the cell's scenario.
  double normaliser = 0.0;
  double wall_ms = 0.0;
};

struct ResultTable {
  std::string plan_name;
  Axis axis = Axis::kNTasks;
  std::vector<ResultRow> detail;
  std::vector<ResultRow> aggregate;
};

/// Runs every (axis value, policy, seed) cell. Cells may run on `jobs`
/// threads; row order is fixed by the plan regardless. A failing cell aborts
/// the plan with an error naming it.
ResultTable run_plan(const ExperimentPlan& plan, unsigned jobs = 1);

/// Mean rows per (axis value, policy), in plan order.
std::vector<ResultRow> aggregate(const ExperimentPlan& plan, const std::vector<ResultRow>& detail);

/// Deterministic result CSV (detail rows, then aggregate rows with seed=mean).
void write_results_csv(std::ostream& out, const ResultTable& table);
ResultTable read_results_csv(std::istream& in);
/// Wall-clock timings, kept apart so result files stay byte-stable.
void write_timings_csv(std::ostream& out, const ResultTable& table);

struct FigureSpec {
  std::string id;
  Axis axis = Axis::kNTasks;
  std::string x_column;
  std::string y_column;
};

/// Throws ConfigError for unknown ids.
FigureSpec figure_spec(const std::string& figure_id);
std::vector<std::string> figure_ids();

/// Writes one `<figure>_<policy>.csv` per curve into `out_dir`, columns
/// named after the figure axes. Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const ResultTable& table,
                                                  const std::string& figure_id,
                                                  const std::filesystem::path& out_dir);

struct HyperDataset {
  std::int64_t n_tasks = 1000;
  std::int64_t n_bs = 100;
  std::string label() const;
};

struct HyperStudyParams {
  std::vector<HyperDataset> datasets = {{1000, 100}, {500, 100}};
  std::vector<double> d_hat_values = {2, 5, 10, 20, 50, 100, 200};
  std::vector<double> u_hat_values = {0.7, 0.8, 0.9, 1.0};
  double fixed_u_hat = 0.9;
  double fixed_d_hat = 20.0;
  std::int64_t repetitions = 3;
  std::uint64_t base_seed = 1;
  PolicyId policy = PolicyId::kDynamicHolding;
  GeneratorParams base;
};

struct TradeoffPoint {
  std::string dataset;
  double knob = 0.0;
  /// Seed means, raw and divided by the normaliser.
  double c_drop = 0.0;
  double c_other = 0.0;
  double normaliser = 0.0;
};

struct HyperStudyResult {
  /// (C_drop, C_dis) per d_hat_max at fixed u_hat_max.
  std::vector<TradeoffPoint> distance_sweep;
  /// (C_drop, C_e) per u_hat_max at fixed d_hat_max.
  std::vector<TradeoffPoint> utilisation_sweep;
};

HyperStudyResult hyperparameter_study(const HyperStudyParams& params, unsigned jobs = 1);

/// `# normaliser=...` header, then dataset,<knob>,c_drop,<other>,c_drop_norm,<other>_norm.
void write_distance_tradeoff(std::ostream& out, const HyperStudyResult& result);
void write_energy_tradeoff(std::ostream& out, const HyperStudyResult& result);

}  // namespace vecs
