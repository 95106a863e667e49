#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vecs/types.hpp"

namespace vecs {

enum class EnergyModel : std::uint8_t {
  /// P_S + (P_max - P_S) * (U / U_max)^3
  kCubic,
  /// P_S + (P_max - P_S) + (U / U_max)^3, kept for auditing the printed form.
  kLiteral,
};

/// Reference normalisation used for the default price weights: N = 500 tasks,
/// M = 50 stations, hard:soft = 1:1, a 2000-slot horizon on a 100x100 grid.
/// Each lambda makes its component's reference magnitude (idle energy over
/// the horizon, resp. every task shipped the mean uniform-grid distance)
/// equal to 10% of the cost of dropping every task.
double reference_lambda_energy();
double reference_lambda_distance();

struct VecsConfig {
  Time t_beta = 3;
  Time delta_latency = 1;
  /// U^max: cores per base station.
  double u_max_bs = 64.0;
  /// U^T: local-mode admission bound, in cores.
  double u_threshold = 32.0;
  /// Fraction of U^max usable by global-mode placements.
  double u_hat_max = 0.9;
  /// Offload radius for global placements and local TOR range.
  double d_hat_max = 20.0;
  /// Favourable utilisations, descending.
  std::vector<double> u_fav = {0.8, 0.7, 0.6};
  double pen_hard = 100.0;
  double pen_soft = 1.0;
  double delta_pen = 0.3;
  double p_static = 0.2;
  double p_max = 2000.0;
  std::int64_t grid_size = 100;
  /// Energy accounting horizon; 0 means "last deadline, rounded up to a batch".
  Time horizon = 0;
  double u_max_per_task = 1.0;
  double lambda_e = reference_lambda_energy();
  double lambda_dis = reference_lambda_distance();
  EnergyModel energy_model = EnergyModel::kCubic;
  /// Centralized-cloud pipeline latency before a task starts executing there.
  Time cc_latency = 6;
  /// Step of the local-mode utilisation scan.
  double local_scan_step = 0.05;
  /// When non-empty, replaces the stepped local scan (descending values).
  std::vector<double> local_u_grid;

  /// Throws ConfigError naming the first broken invariant.
  void validate() const;

  friend bool operator==(const VecsConfig&, const VecsConfig&) = default;
};

/// Flat key -> value view of a config, in a stable order.
std::vector<std::pair<std::string, std::string>> to_key_values(const VecsConfig& cfg);

/// Applies one `key=value` setting. Unknown keys and bad values throw ConfigError.
void apply_setting(VecsConfig& cfg, const std::string& key, const std::string& value);

/// Reads a config file: one `key=value` per line, `#` comments, blank lines ignored.
VecsConfig read_config(std::istream& in, VecsConfig base = {});
void write_config(std::ostream& out, const VecsConfig& cfg);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);
double parse_double(const std::string& text);
std::int64_t parse_int(const std::string& text);
std::string trim(const std::string& text);
std::vector<std::string> split(const std::string& text, char sep);

}  // namespace vecs
