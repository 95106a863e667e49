#include "vecs/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "vecs/errors.hpp"

namespace vecs {

namespace {

constexpr std::array<std::pair<Axis, const char*>, 7> kAxes = {{
    {Axis::kNTasks, "n_tasks"},
    {Axis::kNBs, "n_bs"},
    {Axis::kSlack, "slack"},
    {Axis::kRho, "rho"},
    {Axis::kDHatMax, "d_hat_max"},
    {Axis::kUHatMax, "u_hat_max"},
    {Axis::kGrid, "grid_size"},
}};

}  // namespace

GeneratorParams figure_base_params() {
  GeneratorParams g;
  g.cfg.u_max_bs = 2;
  g.cfg.u_threshold = 1;
  g.cfg.cc_latency = 1000000;
  g.p_min = 80;
  g.p_max = 240;
  g.arrival_max = 2000;
  return g;
}

namespace {

constexpr const char* kTraceTasks = "data/sample_traces/task_events.csv";
constexpr const char* kTraceLocations = "data/sample_traces/locations.csv";

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string seed_text(const ResultRow& r) { return r.seed ? std::to_string(*r.seed) : "mean"; }

template <class E>
[[noreturn]] void rethrow_as(const std::string& prefix, const E& e) {
  throw E(prefix + e.what());
}

[[noreturn]] void rethrow_cell(std::exception_ptr ep, const std::string& cell) {
  const std::string prefix = "plan cell " + cell + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    rethrow_as(prefix, e);
  } catch (const GenerationError& e) {
    rethrow_as(prefix, e);
  } catch (const IngestionError& e) {
    rethrow_as(prefix, e);
  } catch (const ParseError& e) {
    rethrow_as(prefix, e);
  } catch (const std::exception& e) {
    throw InternalFault(prefix + e.what());
  }
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// failure (lowest index) after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn, const std::vector<std::string>& labels) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) rethrow_cell(errors[i], labels[i]);
  }
}

ResultRow row_from(const RunReport& r, const std::string& value, std::uint64_t seed, double normaliser,
                   double wall_ms) {
  ResultRow row;
  row.axis_value = value;
  row.policy = r.policy;
  row.seed = seed;
  row.c_drop = r.ledger.c_drop;
  row.c_e = r.ledger.c_e;
  row.c_dis = r.ledger.c_dis;
  row.c_total = r.c_total;
  row.completed_hard = static_cast<double>(r.counts.completed_hard);
  row.completed_soft = static_cast<double>(r.counts.completed_soft);
  row.dropped_hard = static_cast<double>(r.counts.dropped_hard);
  row.dropped_soft = static_cast<double>(r.counts.dropped_soft);
  row.cloud = static_cast<double>(r.counts.cloud_hard + r.counts.cloud_soft);
  row.normaliser = normaliser;
  row.wall_ms = wall_ms;
  return row;
}

constexpr const char* kHeader =
    "axis,value,policy,seed,c_drop,c_e,c_dis,c_total,completed_hard,completed_soft,dropped_hard,dropped_soft,"
    "cloud,normaliser";

void write_row(std::ostream& out, Axis axis, const ResultRow& r) {
  out << to_string(axis) << ',' << r.axis_value << ',' << to_string(r.policy) << ',' << seed_text(r) << ','
      << format_double(r.c_drop) << ',' << format_double(r.c_e) << ',' << format_double(r.c_dis) << ','
      << format_double(r.c_total) << ',' << format_double(r.completed_hard) << ','
      << format_double(r.completed_soft) << ',' << format_double(r.dropped_hard) << ','
      << format_double(r.dropped_soft) << ',' << format_double(r.cloud) << ',' << format_double(r.normaliser)
      << '\n';
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

void apply_axis(GeneratorParams& g, Axis axis, const std::string& value) {
  switch (axis) {
    case Axis::kNTasks: g.n_tasks = parse_int(value); break;
    case Axis::kNBs: g.n_bs = parse_int(value); break;
    case Axis::kSlack: g.slack = parse_slack_target(value); break;
    case Axis::kRho: g.ratio = parse_ratio(value); break;
    case Axis::kDHatMax: g.cfg.d_hat_max = parse_double(value); break;
    case Axis::kUHatMax: g.cfg.u_hat_max = parse_double(value); break;
    case Axis::kGrid: g.cfg.grid_size = parse_int(value); break;
  }
}

}  // namespace

const char* to_string(Axis axis) {
  for (const auto& [a, name] : kAxes) {
    if (a == axis) return name;
  }
  return "?";
}

Axis parse_axis(const std::string& text) {
  for (const auto& [a, name] : kAxes) {
    if (text == name) return a;
  }
  throw ConfigError("unknown axis '" + text + "'");
}

void ExperimentPlan::validate() const {
  if (values.empty()) throw ConfigError("plan '" + name + "' has no axis values");
  if (policies.empty()) throw ConfigError("plan '" + name + "' has no policies");
  if (repetitions < 1) throw ConfigError("plan '" + name + "': seeds must be >= 1");
  for (const auto& v : values) {
    GeneratorParams g = base;
    try {
      apply_axis(g, axis, v);
      g.validate();
      g.cfg.validate();
    } catch (const Error& e) {
      throw ConfigError("plan '" + name + "', " + to_string(axis) + "=" + v + ": " + e.what());
    }
  }
}

ExperimentPlan read_plan(std::istream& in) {
  ExperimentPlan plan;
  std::string line;
  std::optional<TraceSource> trace;
  auto need_trace = [&]() -> TraceSource& {
    if (!trace) trace.emplace();
    return *trace;
  };
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("plan line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    try {
      if (key == "name") plan.name = value;
      else if (key == "axis") plan.axis = parse_axis(value);
      else if (key == "values") {
        plan.values.clear();
        for (const auto& v : split(value, ',')) plan.values.push_back(trim(v));
      } else if (key == "policies") {
        plan.policies.clear();
        for (const auto& v : split(value, ',')) plan.policies.push_back(parse_policy(trim(v)));
      } else if (key == "seeds") plan.repetitions = parse_int(value);
      else if (key == "base_seed") plan.base_seed = static_cast<std::uint64_t>(parse_int(value));
      else if (key == "n_tasks") plan.base.n_tasks = parse_int(value);
      else if (key == "n_bs") plan.base.n_bs = parse_int(value);
      else if (key == "n_avs") plan.base.n_avs = parse_int(value);
      else if (key == "arrival_max") plan.base.arrival_max = parse_int(value);
      else if (key == "p_min") plan.base.p_min = parse_int(value);
      else if (key == "p_max") plan.base.p_max = parse_int(value);
      else if (key == "slack") plan.base.slack = parse_slack_target(value);
      else if (key == "rho") plan.base.ratio = parse_ratio(value);
      else if (key == "trace.tasks") need_trace().task_file = value;
      else if (key == "trace.locations") need_trace().location_file = value;
      else if (key == "trace.t_max") need_trace().t_max = parse_int(value);
      else if (key == "trace.map.arrival") need_trace().mapping.arrival = value;
      else if (key == "trace.map.processing") need_trace().mapping.processing = value;
      else if (key == "trace.map.deadline") need_trace().mapping.deadline = value;
      else if (key == "trace.map.longitude") need_trace().mapping.longitude = value;
      else if (key == "trace.map.latitude") need_trace().mapping.latitude = value;
      else if (key.rfind("cfg.", 0) == 0) apply_setting(plan.base.cfg, key.substr(4), value);
      else throw ConfigError("unknown key '" + key + "'");
    } catch (const Error& e) {
      throw ConfigError("plan line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  plan.trace = trace;
  plan.validate();
  return plan;
}

void write_plan(std::ostream& out, const ExperimentPlan& plan) {
  out << "name=" << plan.name << '\n';
  out << "axis=" << to_string(plan.axis) << '\n';
  out << "values=" << join(plan.values, ',') << '\n';
  std::vector<std::string> names;
  for (PolicyId p : plan.policies) names.emplace_back(to_string(p));
  out << "policies=" << join(names, ',') << '\n';
  out << "seeds=" << plan.repetitions << '\n';
  out << "base_seed=" << plan.base_seed << '\n';
  out << "n_tasks=" << plan.base.n_tasks << '\n';
  out << "n_bs=" << plan.base.n_bs << '\n';
  out << "n_avs=" << plan.base.n_avs << '\n';
  out << "arrival_max=" << plan.base.arrival_max << '\n';
  out << "p_min=" << plan.base.p_min << '\n';
  out << "p_max=" << plan.base.p_max << '\n';
  out << "slack=" << to_string(plan.base.slack) << '\n';
  out << "rho=" << to_string(plan.base.ratio) << '\n';
  if (plan.trace) {
    const TraceSource& t = *plan.trace;
    out << "trace.tasks=" << t.task_file.string() << '\n';
    out << "trace.locations=" << t.location_file.string() << '\n';
    out << "trace.t_max=" << t.t_max << '\n';
    out << "trace.map.arrival=" << t.mapping.arrival << '\n';
    out << "trace.map.processing=" << t.mapping.processing << '\n';
    out << "trace.map.deadline=" << t.mapping.deadline << '\n';
    out << "trace.map.longitude=" << t.mapping.longitude << '\n';
    out << "trace.map.latitude=" << t.mapping.latitude << '\n';
  }
  for (const auto& [k, v] : to_key_values(plan.base.cfg)) out << "cfg." << k << '=' << v << '\n';
}

std::vector<std::string> preset_names() { return figure_ids(); }

ExperimentPlan preset_plan(const std::string& id) {
  ExperimentPlan plan;
  plan.name = id;
  plan.base = figure_base_params();
  plan.repetitions = 30;
  plan.base_seed = 1;
  plan.policies.assign(all_policies().begin(), all_policies().end());
  plan.axis = figure_spec(id).axis;
  if (id == "fig6") {
    plan.values = {"200", "350", "500", "650", "800", "1000"};
    plan.base.n_bs = 50;
    plan.base.ratio = {2, 1};
  } else if (id == "fig7") {
    plan.values = {"10", "20", "35", "50", "75", "100"};
    plan.base.n_tasks = 500;
  } else if (id == "fig8") {
    plan.values = {"tight", "normal", "loose"};
    plan.base.n_tasks = 500;
    plan.base.n_bs = 50;
  } else if (id == "fig9") {
    plan.values = {"1:3", "1:1", "3:1"};
    plan.base.n_tasks = 500;
    plan.base.n_bs = 50;
  } else {
    TraceSource t;
    t.task_file = kTraceTasks;
    t.location_file = kTraceLocations;
    plan.trace = t;
    plan.base.n_bs = 100;
    plan.base.n_tasks = 1000;
    if (id == "fig10") plan.values = {"250", "500", "750", "1000"};
    else if (id == "fig11") plan.values = {"tight", "normal", "loose"};
    else plan.values = {"1:3", "1:1", "3:1"};
  }
  plan.validate();
  return plan;
}

Scenario build_scenario(const ExperimentPlan& plan, const std::string& axis_value, std::uint64_t seed) {
  GeneratorParams g = plan.base;
  apply_axis(g, plan.axis, axis_value);
  g.seed = seed;
  if (!plan.trace) return generate_synthetic(g);

  const TraceSource& t = *plan.trace;
  std::ifstream tasks(t.task_file);
  if (!tasks) throw IngestionError("cannot open task trace " + t.task_file.string());
  std::ifstream locations(t.location_file);
  if (!locations) throw IngestionError("cannot open location trace " + t.location_file.string());
  ScalingParams s;
  s.n_tasks = g.n_tasks;
  s.n_bs = g.n_bs;
  s.t_max = t.t_max;
  s.grid_size = g.cfg.grid_size;
  s.ratio = g.ratio;
  if (g.slack != SlackTarget::kMixed) s.slack = g.slack;
  s.seed = seed;
  s.mapping = t.mapping;
  s.cfg = g.cfg;
  return ingest_trace(tasks, locations, s);
}

ResultTable run_plan(const ExperimentPlan& plan, unsigned jobs) {
  plan.validate();
  const std::size_t n_values = plan.values.size();
  const auto reps = static_cast<std::size_t>(plan.repetitions);
  const std::size_t n_units = n_values * reps;

  // One unit = one scenario, run under every policy.
  std::vector<std::vector<ResultRow>> unit_rows(n_units);
  std::vector<std::string> labels(n_units);
  for (std::size_t u = 0; u < n_units; ++u) {
    labels[u] = std::string(to_string(plan.axis)) + "=" + plan.values[u / reps] +
                " seed=" + std::to_string(plan.base_seed + u % reps);
  }
  parallel_for(
      n_units, jobs,
      [&](std::size_t u) {
        const std::string& value = plan.values[u / reps];
        const std::uint64_t seed = plan.base_seed + u % reps;
        const Scenario scenario = build_scenario(plan, value, seed);
        const double normaliser = drop_all_penalty(scenario.tasks, scenario.cfg);
        for (PolicyId p : plan.policies) {
          const auto t0 = std::chrono::steady_clock::now();
          RunReport report;
          try {
            report = run(scenario, p);
          } catch (const Error& e) {
            throw InternalFault(std::string("policy ") + to_string(p) + ": " + e.what());
          }
          const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          unit_rows[u].push_back(row_from(report, value, seed, normaliser, ms));
        }
      },
      labels);

  ResultTable table;
  table.plan_name = plan.name;
  table.axis = plan.axis;
  for (std::size_t v = 0; v < n_values; ++v) {
    for (std::size_t k = 0; k < plan.policies.size(); ++k) {
      for (std::size_t r = 0; r < reps; ++r) table.detail.push_back(unit_rows[v * reps + r][k]);
    }
  }
  table.aggregate = aggregate(plan, table.detail);
  return table;
}

std::vector<ResultRow> aggregate(const ExperimentPlan& plan, const std::vector<ResultRow>& detail) {
  std::vector<ResultRow> out;
  for (const auto& value : plan.values) {
    for (PolicyId p : plan.policies) {
      std::map<std::string, std::vector<double>> cols;
      for (const auto& r : detail) {
        if (r.axis_value != value || r.policy != p) continue;
        cols["c_drop"].push_back(r.c_drop);
        cols["c_e"].push_back(r.c_e);
        cols["c_dis"].push_back(r.c_dis);
        cols["c_total"].push_back(r.c_total);
        cols["ch"].push_back(r.completed_hard);
        cols["cs"].push_back(r.completed_soft);
        cols["dh"].push_back(r.dropped_hard);
        cols["ds"].push_back(r.dropped_soft);
        cols["cloud"].push_back(r.cloud);
        cols["norm"].push_back(r.normaliser);
        cols["ms"].push_back(r.wall_ms);
      }
      if (cols.empty()) continue;
      ResultRow m;
      m.axis_value = value;
      m.policy = p;
      m.c_drop = mean(cols["c_drop"]);
      m.c_e = mean(cols["c_e"]);
      m.c_dis = mean(cols["c_dis"]);
      m.c_total = mean(cols["c_total"]);
      m.completed_hard = mean(cols["ch"]);
      m.completed_soft = mean(cols["cs"]);
      m.dropped_hard = mean(cols["dh"]);
      m.dropped_soft = mean(cols["ds"]);
      m.cloud = mean(cols["cloud"]);
      m.normaliser = mean(cols["norm"]);
      m.wall_ms = mean(cols["ms"]);
      out.push_back(m);
    }
  }
  return out;
}

void write_results_csv(std::ostream& out, const ResultTable& table) {
  out << "# plan=" << table.plan_name << '\n';
  out << kHeader << '\n';
  for (const auto& r : table.detail) write_row(out, table.axis, r);
  for (const auto& r : table.aggregate) write_row(out, table.axis, r);
}

ResultTable read_results_csv(std::istream& in) {
  ResultTable table;
  std::string line;
  bool header = false;
  bool have_axis = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# plan=", 0) == 0) {
      table.plan_name = line.substr(7);
      continue;
    }
    if (!header) {
      if (line != kHeader) throw ParseError("unexpected results header: " + line);
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 14) throw ParseError("results row needs 14 fields: " + line);
    const Axis axis = parse_axis(f[0]);
    if (have_axis && axis != table.axis) throw ParseError("mixed axes in results file");
    table.axis = axis;
    have_axis = true;
    ResultRow r;
    r.axis_value = f[1];
    r.policy = parse_policy(f[2]);
    if (f[3] != "mean") r.seed = static_cast<std::uint64_t>(parse_int(f[3]));
    r.c_drop = parse_double(f[4]);
    r.c_e = parse_double(f[5]);
    r.c_dis = parse_double(f[6]);
    r.c_total = parse_double(f[7]);
    r.completed_hard = parse_double(f[8]);
    r.completed_soft = parse_double(f[9]);
    r.dropped_hard = parse_double(f[10]);
    r.dropped_soft = parse_double(f[11]);
    r.cloud = parse_double(f[12]);
    r.normaliser = parse_double(f[13]);
    (r.seed ? table.detail : table.aggregate).push_back(r);
  }
  if (!header) throw ParseError("empty results file");
  return table;
}

void write_timings_csv(std::ostream& out, const ResultTable& table) {
  out << "value,policy,seed,wall_ms\n";
  for (const auto& r : table.detail) {
    out << r.axis_value << ',' << to_string(r.policy) << ',' << seed_text(r) << ',' << format_double(r.wall_ms)
        << '\n';
  }
}

std::vector<std::string> figure_ids() { return {"fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"}; }

FigureSpec figure_spec(const std::string& id) {
  if (id == "fig6") return {id, Axis::kNTasks, "n_tasks", "c_drop"};
  if (id == "fig7") return {id, Axis::kNBs, "n_bs", "c_drop"};
  if (id == "fig8") return {id, Axis::kSlack, "slack", "c_drop"};
  if (id == "fig9") return {id, Axis::kRho, "rho", "c_drop"};
  if (id == "fig10") return {id, Axis::kNTasks, "n_tasks", "c_total"};
  if (id == "fig11") return {id, Axis::kSlack, "slack", "c_total"};
  if (id == "fig12") return {id, Axis::kRho, "rho", "c_total"};
  throw ConfigError("unknown figure id '" + id + "' (fig6..fig12)");
}

std::vector<std::filesystem::path> emit_plot_data(const ResultTable& table, const std::string& figure_id,
                                                  const std::filesystem::path& out_dir) {
  const FigureSpec spec = figure_spec(figure_id);
  if (table.axis != spec.axis) {
    throw ConfigError("figure " + figure_id + " plots axis " + to_string(spec.axis) + " but the table sweeps " +
                      to_string(table.axis));
  }
  std::filesystem::create_directories(out_dir);
  std::vector<PolicyId> order;
  for (const auto& r : table.aggregate) {
    if (std::find(order.begin(), order.end(), r.policy) == order.end()) order.push_back(r.policy);
  }
  std::vector<std::filesystem::path> written;
  for (PolicyId p : order) {
    const auto path = out_dir / (figure_id + "_" + to_string(p) + ".csv");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << spec.x_column << ',' << spec.y_column << '\n';
    for (const auto& r : table.aggregate) {
      if (r.policy != p) continue;
      out << r.axis_value << ',' << format_double(spec.y_column == "c_drop" ? r.c_drop : r.c_total) << '\n';
    }
    written.push_back(path);
  }
  return written;
}

std::string HyperDataset::label() const { return std::to_string(n_tasks) + "x" + std::to_string(n_bs); }

HyperStudyResult hyperparameter_study(const HyperStudyParams& params, unsigned jobs) {
  if (params.repetitions < 1) throw ConfigError("hyperparameter study needs at least one seed");
  struct Job {
    std::size_t dataset;
    std::int64_t rep;
  };
  std::vector<Job> units;
  std::vector<std::string> labels;
  for (std::size_t d = 0; d < params.datasets.size(); ++d) {
    for (std::int64_t r = 0; r < params.repetitions; ++r) {
      units.push_back({d, r});
      labels.push_back(params.datasets[d].label() + " seed=" + std::to_string(params.base_seed + r));
    }
  }
  const std::size_t nd = params.d_hat_values.size();
  const std::size_t nu = params.u_hat_values.size();
  // Per unit: (c_drop, c_dis) per d value then (c_drop, c_e) per u value, plus the normaliser.
  struct UnitResult {
    std::vector<std::pair<double, double>> dist;
    std::vector<std::pair<double, double>> util;
    double normaliser = 0.0;
  };
  std::vector<UnitResult> results(units.size());
  parallel_for(
      units.size(), jobs,
      [&](std::size_t i) {
        GeneratorParams g = params.base;
        g.n_tasks = params.datasets[units[i].dataset].n_tasks;
        g.n_bs = params.datasets[units[i].dataset].n_bs;
        g.seed = params.base_seed + static_cast<std::uint64_t>(units[i].rep);
        Scenario scenario = generate_synthetic(g);
        UnitResult& out = results[i];
        out.normaliser = drop_all_penalty(scenario.tasks, scenario.cfg);
        for (double d : params.d_hat_values) {
          scenario.cfg.u_hat_max = params.fixed_u_hat;
          scenario.cfg.d_hat_max = d;
          const RunReport r = run(scenario, params.policy);
          out.dist.emplace_back(r.ledger.c_drop, r.ledger.c_dis);
        }
        for (double u : params.u_hat_values) {
          scenario.cfg.u_hat_max = u;
          scenario.cfg.d_hat_max = params.fixed_d_hat;
          const RunReport r = run(scenario, params.policy);
          out.util.emplace_back(r.ledger.c_drop, r.ledger.c_e);
        }
      },
      labels);

  HyperStudyResult study;
  for (std::size_t d = 0; d < params.datasets.size(); ++d) {
    const std::string label = params.datasets[d].label();
    auto collect = [&](bool distance, std::size_t k) {
      std::vector<double> drop, other, norm;
      for (std::size_t i = 0; i < units.size(); ++i) {
        if (units[i].dataset != d) continue;
        const auto& pr = distance ? results[i].dist[k] : results[i].util[k];
        drop.push_back(pr.first);
        other.push_back(pr.second);
        norm.push_back(results[i].normaliser);
      }
      return TradeoffPoint{label, distance ? params.d_hat_values[k] : params.u_hat_values[k], mean(drop),
                           mean(other), mean(norm)};
    };
    for (std::size_t k = 0; k < nd; ++k) study.distance_sweep.push_back(collect(true, k));
    for (std::size_t k = 0; k < nu; ++k) study.utilisation_sweep.push_back(collect(false, k));
  }
  return study;
}

namespace {

void write_tradeoff(std::ostream& out, const std::vector<TradeoffPoint>& points, const char* knob,
                    const char* other) {
  out << "# normaliser=drop_all_penalty\n";
  std::vector<std::string> seen;
  for (const auto& p : points) {
    if (std::find(seen.begin(), seen.end(), p.dataset) != seen.end()) continue;
    seen.push_back(p.dataset);
    out << "# normaliser." << p.dataset << '=' << format_double(p.normaliser) << '\n';
  }
  out << "dataset," << knob << ",c_drop," << other << ",c_drop_norm," << other << "_norm\n";
  for (const auto& p : points) {
    const double n = p.normaliser > 0.0 ? p.normaliser : 1.0;
    out << p.dataset << ',' << format_double(p.knob) << ',' << format_double(p.c_drop) << ','
        << format_double(p.c_other) << ',' << format_double(p.c_drop / n) << ',' << format_double(p.c_other / n)
        << '\n';
  }
}

}  // namespace

void write_distance_tradeoff(std::ostream& out, const HyperStudyResult& result) {
  write_tradeoff(out, result.distance_sweep, "d_hat_max", "c_dis");
}

void write_energy_tradeoff(std::ostream& out, const HyperStudyResult& result) {
  write_tradeoff(out, result.utilisation_sweep, "u_hat_max", "c_e");
}

}  // namespace vecs
