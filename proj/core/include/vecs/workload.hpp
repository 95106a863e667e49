#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vecs/config.hpp"
#include "vecs/model.hpp"
#include "vecs/scenario.hpp"

namespace vecs {

enum class SlackTarget : std::uint8_t { kTight, kNormal, kLoose, kMixed };

SlackTarget parse_slack_target(const std::string& text);
const char* to_string(SlackTarget target);

/// hard:soft count ratio.
struct HardSoftRatio {
  std::int64_t hard = 1;
  std::int64_t soft = 1;
};

HardSoftRatio parse_ratio(const std::string& text);
std::string to_string(const HardSoftRatio& ratio);

/// Number of hard tasks among n: round(n*h/(h+s)), halves rounding up.
std::int64_t hard_count(std::int64_t n, const HardSoftRatio& ratio);

struct GeneratorParams {
  std::int64_t n_tasks = 500;
  std::int64_t n_bs = 50;
  /// 0 selects ceil(n_tasks / 2) vehicles.
  std::int64_t n_avs = 0;
  Time arrival_max = 2000;
  Time p_min = 10;
  Time p_max = 40;
  SlackTarget slack = SlackTarget::kNormal;
  HardSoftRatio ratio;
  std::uint64_t seed = 1;
  VecsConfig cfg;

  void validate() const;
};

/// Slack band [lo, hi] used when sampling; tight is [1, 1.5), loose (3, 5].
struct SlackBand {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double mu) const;
};
SlackBand slack_band(SlackClass c);

Scenario generate_synthetic(const GeneratorParams& params);

/// Which trace columns carry which field. Times are absolute source units
/// (arrival, deadline) or durations (processing).
struct TraceMapping {
  std::string arrival = "arrival_ns";
  std::string processing = "processing_ns";
  std::string deadline = "deadline_ns";
  std::string longitude = "longitude";
  std::string latitude = "latitude";
};

struct ScalingParams {
  std::int64_t n_tasks = 500;
  std::int64_t n_bs = 100;
  Time t_max = 2000;
  std::int64_t grid_size = 100;
  HardSoftRatio ratio;
  /// When set, deadlines are re-derived so every task lands in this band.
  std::optional<SlackTarget> slack;
  std::uint64_t seed = 1;
  TraceMapping mapping;
  VecsConfig cfg;
};

struct IngestReport {
  std::int64_t malformed_task_records = 0;
  std::int64_t malformed_location_records = 0;
  std::int64_t processing_clamped = 0;
  std::int64_t invalid_after_scaling = 0;
};

/// Reads comma-separated task and location traces (header row first) and
/// builds a scenario. Throws IngestionError when nothing usable remains.
Scenario ingest_trace(std::istream& task_trace, std::istream& location_trace,
                      const ScalingParams& scaling, IngestReport* report = nullptr);

/// Equirectangular projection about (lon0, lat0), metres.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};
PlanarPoint project_equirectangular(double lon, double lat, double lon0, double lat0);

}  // namespace vecs
