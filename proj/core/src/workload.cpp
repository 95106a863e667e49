#include "vecs/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "vecs/errors.hpp"
#include "vecs/rng.hpp"

namespace vecs {

namespace {

constexpr int kBandAttempts = 256;
constexpr double kLooseUpper = 5.0;
constexpr std::int64_t kAvStep = 2;

enum Stream : std::uint64_t { kTasks = 1, kStations = 2, kVehicles = 3, kFlags = 4, kSlack = 5 };

SlackClass pick_class(SlackTarget target, Rng& rng) {
  switch (target) {
    case SlackTarget::kTight: return SlackClass::kTight;
    case SlackTarget::kNormal: return SlackClass::kNormal;
    case SlackTarget::kLoose: return SlackClass::kLoose;
    case SlackTarget::kMixed: break;
  }
  return static_cast<SlackClass>(rng.uniform_int(0, 2));
}

// Deadline for (arrival, p) with (d - a) / p inside the band of `cls` and d
// reaching the end of the arrival batch. Empty when this draw misses.
std::optional<Time> deadline_in_band(Time arrival, Time p, SlackClass cls, Time t_beta, Rng& rng) {
  const SlackBand band = slack_band(cls);
  const double mu = rng.uniform(band.lo, band.hi);
  const Time deadline = arrival + static_cast<Time>(std::ceil(mu * static_cast<double>(p)));
  const Time batch_end = (arrival / t_beta + 1) * t_beta;
  if (deadline < batch_end) return std::nullopt;
  Task probe{0, arrival, deadline, p, Criticality::kSoft, 0};
  if (!is_valid(probe) || slack_class(probe) != cls) return std::nullopt;
  return deadline;
}

void assign_flags(std::vector<Task>& tasks, const HardSoftRatio& ratio, std::uint64_t seed) {
  const std::int64_t n = static_cast<std::int64_t>(tasks.size());
  const std::int64_t hard = hard_count(n, ratio);
  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, kFlags));
  for (std::int64_t i = 0; i < hard; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(i, n - 1));
    std::swap(order[static_cast<std::size_t>(i)], order[j]);
  }
  for (auto& t : tasks) t.flag = Criticality::kSoft;
  for (std::int64_t i = 0; i < hard; ++i) tasks[order[static_cast<std::size_t>(i)]].flag = Criticality::kHard;
}

Point uniform_point(Rng& rng, std::int64_t m) { return {rng.uniform_int(0, m), rng.uniform_int(0, m)}; }

}  // namespace

SlackTarget parse_slack_target(const std::string& text) {
  const std::string t = trim(text);
  if (t == "tight") return SlackTarget::kTight;
  if (t == "normal") return SlackTarget::kNormal;
  if (t == "loose") return SlackTarget::kLoose;
  if (t == "mixed") return SlackTarget::kMixed;
  throw ConfigError("unknown slack class '" + text + "' (tight|normal|loose|mixed)");
}

const char* to_string(SlackTarget target) {
  switch (target) {
    case SlackTarget::kTight: return "tight";
    case SlackTarget::kNormal: return "normal";
    case SlackTarget::kLoose: return "loose";
    case SlackTarget::kMixed: return "mixed";
  }
  return "?";
}

HardSoftRatio parse_ratio(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError("ratio must look like hard:soft, got '" + text + "'");
  HardSoftRatio r;
  try {
    r.hard = parse_int(parts[0]);
    r.soft = parse_int(parts[1]);
  } catch (const ParseError&) {
    throw ConfigError("ratio must look like hard:soft, got '" + text + "'");
  }
  if (r.hard < 1 || r.soft < 1) throw ConfigError("ratio components must be positive");
  return r;
}

std::string to_string(const HardSoftRatio& ratio) {
  return std::to_string(ratio.hard) + ":" + std::to_string(ratio.soft);
}

std::int64_t hard_count(std::int64_t n, const HardSoftRatio& ratio) {
  const std::int64_t total = ratio.hard + ratio.soft;
  return (2 * n * ratio.hard + total) / (2 * total);
}

bool SlackBand::contains(double mu) const { return mu >= lo && mu <= hi; }

SlackBand slack_band(SlackClass c) {
  switch (c) {
    case SlackClass::kTight: return {1.0, std::nextafter(1.5, 0.0)};
    case SlackClass::kNormal: return {1.5, 3.0};
    case SlackClass::kLoose: return {std::nextafter(3.0, 4.0), kLooseUpper};
  }
  return {};
}

void GeneratorParams::validate() const {
  if (n_tasks < 1) throw ConfigError("n_tasks must be >= 1");
  if (n_bs < 1) throw ConfigError("n_bs must be >= 1");
  if (n_avs < 0) throw ConfigError("n_avs must be >= 0");
  if (arrival_max < cfg.t_beta) throw ConfigError("arrival_max must be >= t_beta");
  if (p_min < 1 || p_max < p_min) throw ConfigError("need 1 <= p_min <= p_max");
  if (ratio.hard < 1 || ratio.soft < 1) throw ConfigError("ratio components must be positive");
  cfg.validate();
}

Scenario generate_synthetic(const GeneratorParams& params) {
  params.validate();
  const VecsConfig& cfg = params.cfg;
  Rng task_rng(derive_seed(params.seed, kTasks));
  const std::int64_t n_avs = params.n_avs > 0 ? params.n_avs : (params.n_tasks + 1) / 2;

  struct Draw {
    Task task;
    std::size_t order;
  };
  std::vector<Draw> draws;
  draws.reserve(static_cast<std::size_t>(params.n_tasks));
  for (std::int64_t i = 0; i < params.n_tasks; ++i) {
    Task t;
    t.arrival = task_rng.uniform_int(0, params.arrival_max);
    std::optional<Time> deadline;
    for (int attempt = 0; attempt < kBandAttempts && !deadline; ++attempt) {
      const SlackClass cls = pick_class(params.slack, task_rng);
      t.min_processing = task_rng.uniform_int(params.p_min, params.p_max);
      deadline = deadline_in_band(t.arrival, t.min_processing, cls, cfg.t_beta, task_rng);
    }
    if (!deadline) {
      throw GenerationError(std::string("slack band '") + to_string(params.slack) +
                            "' is unsatisfiable: deadlines must satisfy d >= t_bk + t_beta and " +
                            "(d - a) / p inside the band for p in [" + std::to_string(params.p_min) +
                            ", " + std::to_string(params.p_max) + "]");
    }
    t.deadline = *deadline;
    t.origin_av = static_cast<AvId>(task_rng.uniform_int(0, n_avs - 1));
    draws.push_back({t, static_cast<std::size_t>(i)});
  }
  std::sort(draws.begin(), draws.end(), [](const Draw& x, const Draw& y) {
    return x.task.arrival != y.task.arrival ? x.task.arrival < y.task.arrival : x.order < y.order;
  });

  Scenario s;
  s.cfg = cfg;
  s.seed = params.seed;
  s.tasks.reserve(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    Task t = draws[i].task;
    t.id = static_cast<TaskId>(i);
    s.tasks.push_back(t);
  }
  assign_flags(s.tasks, params.ratio, params.seed);

  Rng bs_rng(derive_seed(params.seed, kStations));
  for (std::int64_t j = 0; j < params.n_bs; ++j) {
    s.stations.push_back({static_cast<BsId>(j), uniform_point(bs_rng, cfg.grid_size)});
  }

  // Vehicles start uniformly on the grid and drift a bounded step between
  // the batches in which they issue requests.
  Rng av_rng(derive_seed(params.seed, kVehicles));
  std::vector<Point> current(static_cast<std::size_t>(n_avs));
  for (auto& p : current) p = uniform_point(av_rng, cfg.grid_size);
  std::map<AvId, std::int64_t> last_batch;
  std::map<std::pair<std::int64_t, AvId>, Point> entries;
  for (const auto& t : s.tasks) {
    const std::int64_t batch = batch_of(t.arrival, cfg.t_beta);
    auto it = last_batch.find(t.origin_av);
    if (it != last_batch.end() && it->second == batch) continue;
    Point& p = current[static_cast<std::size_t>(t.origin_av)];
    if (it != last_batch.end()) {
      p.x = std::clamp<std::int64_t>(p.x + av_rng.uniform_int(-kAvStep, kAvStep), 0, cfg.grid_size);
      p.y = std::clamp<std::int64_t>(p.y + av_rng.uniform_int(-kAvStep, kAvStep), 0, cfg.grid_size);
    }
    last_batch[t.origin_av] = batch;
    entries[{batch, t.origin_av}] = p;
  }
  for (const auto& [key, p] : entries) s.av_locations.push_back({key.first, key.second, p});
  return s;
}

PlanarPoint project_equirectangular(double lon, double lat, double lon0, double lat0) {
  constexpr double kEarthRadius = 6371000.0;
  constexpr double kDeg = std::numbers::pi / 180.0;
  return {kEarthRadius * (lon - lon0) * kDeg * std::cos(lat0 * kDeg), kEarthRadius * (lat - lat0) * kDeg};
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in, const char* what) {
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (table.header.empty()) {
      table.header = split(line, ',');
      continue;
    }
    table.rows.push_back(split(line, ','));
  }
  if (table.header.empty()) throw IngestionError(std::string(what) + " trace has no header row");
  return table;
}

std::size_t column(const CsvTable& table, const std::string& name, const char* what) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) return i;
  }
  throw IngestionError(std::string(what) + " trace lacks column '" + name + "'");
}

std::optional<double> field(const std::vector<std::string>& row, std::size_t col) {
  if (col >= row.size() || row[col].empty()) return std::nullopt;
  try {
    const double v = parse_double(row[col]);
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

}  // namespace

Scenario ingest_trace(std::istream& task_trace, std::istream& location_trace,
                      const ScalingParams& scaling, IngestReport* report) {
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  rep = {};
  const VecsConfig& cfg = scaling.cfg;
  cfg.validate();
  if (scaling.n_tasks < 1 || scaling.n_bs < 1 || scaling.t_max < 1 || scaling.grid_size < 1) {
    throw IngestionError("scaling parameters must be positive");
  }

  const CsvTable tasks_csv = read_csv(task_trace, "task");
  const std::size_t c_arr = column(tasks_csv, scaling.mapping.arrival, "task");
  const std::size_t c_proc = column(tasks_csv, scaling.mapping.processing, "task");
  const std::size_t c_dl = column(tasks_csv, scaling.mapping.deadline, "task");

  struct Raw {
    double arrival, processing, deadline;
  };
  std::vector<Raw> raw;
  for (const auto& row : tasks_csv.rows) {
    if (static_cast<std::int64_t>(raw.size()) >= scaling.n_tasks) break;
    auto a = field(row, c_arr);
    auto p = field(row, c_proc);
    auto d = field(row, c_dl);
    if (!a || !p || !d || *p < 0.0) {
      ++rep.malformed_task_records;
      continue;
    }
    raw.push_back({*a, *p, *d});
  }
  if (raw.empty()) throw IngestionError("task trace has no usable records");

  double t_lo = raw.front().arrival;
  double t_hi = raw.front().deadline;
  for (const auto& r : raw) {
    t_lo = std::min({t_lo, r.arrival, r.deadline});
    t_hi = std::max({t_hi, r.arrival, r.deadline});
  }
  const double span = t_hi - t_lo;
  const double scale = span > 0.0 ? static_cast<double>(scaling.t_max) / span : 0.0;

  Rng slack_rng(derive_seed(scaling.seed, kSlack));
  std::vector<Task> tasks;
  for (const auto& r : raw) {
    Task t;
    t.arrival = static_cast<Time>(std::floor((r.arrival - t_lo) * scale));
    t.deadline = static_cast<Time>(std::floor((r.deadline - t_lo) * scale));
    t.min_processing = static_cast<Time>(std::floor(r.processing * scale));
    if (t.min_processing < 1) {
      t.min_processing = 1;
      ++rep.processing_clamped;
    }
    if (scaling.slack) {
      std::optional<Time> deadline;
      for (int attempt = 0; attempt < kBandAttempts && !deadline; ++attempt) {
        deadline = deadline_in_band(t.arrival, t.min_processing, pick_class(*scaling.slack, slack_rng),
                                    cfg.t_beta, slack_rng);
      }
      if (!deadline) {
        ++rep.invalid_after_scaling;
        continue;
      }
      t.deadline = *deadline;
    }
    if (!is_valid(t)) {
      ++rep.invalid_after_scaling;
      continue;
    }
    tasks.push_back(t);
  }
  if (tasks.empty()) throw IngestionError("no task survives scaling");
  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const Task& x, const Task& y) { return x.arrival < y.arrival; });
  for (std::size_t i = 0; i < tasks.size(); ++i) tasks[i].id = static_cast<TaskId>(i);
  assign_flags(tasks, scaling.ratio, scaling.seed);

  const CsvTable loc_csv = read_csv(location_trace, "location");
  const std::size_t c_lon = column(loc_csv, scaling.mapping.longitude, "location");
  const std::size_t c_lat = column(loc_csv, scaling.mapping.latitude, "location");
  std::vector<std::pair<double, double>> lonlat;
  for (const auto& row : loc_csv.rows) {
    auto lon = field(row, c_lon);
    auto lat = field(row, c_lat);
    if (!lon || !lat || std::abs(*lat) > 90.0 || std::abs(*lon) > 180.0) {
      ++rep.malformed_location_records;
      continue;
    }
    lonlat.emplace_back(*lon, *lat);
  }
  if (static_cast<std::int64_t>(lonlat.size()) <= scaling.n_bs) {
    throw IngestionError("location trace needs more than n_bs usable records (stations, then vehicles)");
  }

  double lon0 = 0.0, lat0 = 0.0;
  for (const auto& [lon, lat] : lonlat) {
    lon0 += lon;
    lat0 += lat;
  }
  lon0 /= static_cast<double>(lonlat.size());
  lat0 /= static_cast<double>(lonlat.size());
  std::vector<PlanarPoint> planar;
  planar.reserve(lonlat.size());
  for (const auto& [lon, lat] : lonlat) planar.push_back(project_equirectangular(lon, lat, lon0, lat0));
  double x_lo = planar.front().x, x_hi = x_lo, y_lo = planar.front().y, y_hi = y_lo;
  for (const auto& p : planar) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  // One factor for both axes so relative distances survive.
  const double extent = std::max(x_hi - x_lo, y_hi - y_lo);
  const double grid_scale = extent > 0.0 ? static_cast<double>(scaling.grid_size) / extent : 0.0;
  auto to_grid = [&](const PlanarPoint& p) {
    return Point{static_cast<std::int64_t>(std::llround((p.x - x_lo) * grid_scale)),
                 static_cast<std::int64_t>(std::llround((p.y - y_lo) * grid_scale))};
  };

  Scenario s;
  s.cfg = cfg;
  s.cfg.grid_size = scaling.grid_size;
  s.seed = scaling.seed;
  for (std::int64_t j = 0; j < scaling.n_bs; ++j) {
    s.stations.push_back({static_cast<BsId>(j), to_grid(planar[static_cast<std::size_t>(j)])});
  }
  const std::size_t pool = planar.size() - static_cast<std::size_t>(scaling.n_bs);
  std::map<std::pair<std::int64_t, AvId>, Point> entries;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const auto av = static_cast<AvId>(k % pool);
    tasks[k].origin_av = av;
    const Point p = to_grid(planar[static_cast<std::size_t>(scaling.n_bs) + static_cast<std::size_t>(av)]);
    entries[{batch_of(tasks[k].arrival, cfg.t_beta), av}] = p;
  }
  for (const auto& [key, p] : entries) s.av_locations.push_back({key.first, key.second, p});
  s.tasks = std::move(tasks);
  return s;
}

}  // namespace vecs
