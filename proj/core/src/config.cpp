#include "vecs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vecs/errors.hpp"

namespace vecs {

namespace {

constexpr double kRefTasks = 500.0;
constexpr double kRefStations = 50.0;
constexpr double kRefHorizon = 2000.0;
constexpr double kRefGrid = 100.0;
constexpr double kRefShare = 0.1;

// Mean distance between two uniform points in the unit square.
double unit_square_mean_distance() {
  const double r2 = std::numbers::sqrt2;
  return (2.0 + r2 + 5.0 * std::log(1.0 + r2)) / 15.0;
}

// 250 hard at 100 + 250 soft at 1, times (1 + 0.3).
double reference_drop_all() { return (kRefTasks / 2.0) * (100.0 + 1.0) * 1.3; }

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

}  // namespace

double reference_lambda_energy() {
  const double idle = kRefStations * kRefHorizon * 0.2;
  return kRefShare * reference_drop_all() / idle;
}

double reference_lambda_distance() {
  const double shipped = kRefTasks * kRefGrid * unit_square_mean_distance();
  return kRefShare * reference_drop_all() / shipped;
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      out.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(trim(current));
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error("cannot format double");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("not a number: '" + text + "'");
  }
  return value;
}

std::int64_t parse_int(const std::string& text) {
  const std::string t = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("not an integer: '" + text + "'");
  }
  return value;
}

void VecsConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (t_beta < 1) fail("t_beta must be >= 1");
  if (delta_latency < 0 || delta_latency > t_beta) fail("delta_latency must lie in [0, t_beta]");
  if (!(u_max_bs > 0.0)) fail("u_max_bs must be positive");
  if (!(u_threshold > 0.0) || u_threshold > u_max_bs) fail("u_threshold must lie in (0, u_max_bs]");
  if (!(u_hat_max > 0.0) || u_hat_max > 1.0) fail("u_hat_max must lie in (0, 1]");
  if (!(d_hat_max >= 0.0)) fail("d_hat_max must be >= 0");
  if (u_fav.empty()) fail("u_fav must not be empty");
  for (std::size_t i = 0; i < u_fav.size(); ++i) {
    if (!(u_fav[i] > 0.0) || u_fav[i] > 1.0) fail("u_fav values must lie in (0, 1]");
    if (i && !(u_fav[i] < u_fav[i - 1])) fail("u_fav must be strictly descending");
  }
  if (!(pen_soft > 0.0) || std::abs(pen_hard / pen_soft - 100.0) > 1e-12) {
    fail("pen_hard / pen_soft must equal 100");
  }
  if (delta_pen < 0.0 || delta_pen > 1.0) fail("delta_pen must lie in [0, 1]");
  if (p_static < 0.0 || p_max < p_static) fail("need 0 <= p_static <= p_max");
  if (grid_size < 1) fail("grid_size must be >= 1");
  if (horizon < 0) fail("horizon must be >= 0");
  if (u_max_per_task != 1.0) fail("u_max_per_task is fixed at 1");
  if (lambda_e < 0.0 || lambda_dis < 0.0) fail("lambda weights must be >= 0");
  if (cc_latency < 0) fail("cc_latency must be >= 0");
  if (!(local_scan_step > 0.0) || local_scan_step > 1.0) fail("local_scan_step must lie in (0, 1]");
  for (std::size_t i = 0; i < local_u_grid.size(); ++i) {
    if (!(local_u_grid[i] > 0.0) || local_u_grid[i] > 1.0) fail("local_u_grid values must lie in (0, 1]");
    if (i && !(local_u_grid[i] < local_u_grid[i - 1])) fail("local_u_grid must be strictly descending");
  }
}

std::vector<std::pair<std::string, std::string>> to_key_values(const VecsConfig& cfg) {
  return {
      {"t_beta", std::to_string(cfg.t_beta)},
      {"delta_latency", std::to_string(cfg.delta_latency)},
      {"u_max_bs", format_double(cfg.u_max_bs)},
      {"u_threshold", format_double(cfg.u_threshold)},
      {"u_hat_max", format_double(cfg.u_hat_max)},
      {"d_hat_max", format_double(cfg.d_hat_max)},
      {"u_fav", join(cfg.u_fav)},
      {"pen_hard", format_double(cfg.pen_hard)},
      {"pen_soft", format_double(cfg.pen_soft)},
      {"delta_pen", format_double(cfg.delta_pen)},
      {"p_static", format_double(cfg.p_static)},
      {"p_max", format_double(cfg.p_max)},
      {"grid_size", std::to_string(cfg.grid_size)},
      {"horizon", std::to_string(cfg.horizon)},
      {"u_max_per_task", format_double(cfg.u_max_per_task)},
      {"lambda_e", format_double(cfg.lambda_e)},
      {"lambda_dis", format_double(cfg.lambda_dis)},
      {"energy_model", cfg.energy_model == EnergyModel::kCubic ? "cubic" : "literal"},
      {"cc_latency", std::to_string(cfg.cc_latency)},
      {"local_scan_step", format_double(cfg.local_scan_step)},
      {"local_u_grid", join(cfg.local_u_grid)},
  };
}

void apply_setting(VecsConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  try {
    if (key == "t_beta") cfg.t_beta = parse_int(value);
    else if (key == "delta_latency") cfg.delta_latency = parse_int(value);
    else if (key == "u_max_bs") cfg.u_max_bs = parse_double(value);
    else if (key == "u_threshold") cfg.u_threshold = parse_double(value);
    else if (key == "u_hat_max") cfg.u_hat_max = parse_double(value);
    else if (key == "d_hat_max") cfg.d_hat_max = parse_double(value);
    else if (key == "u_fav") cfg.u_fav = parse_list(value);
    else if (key == "pen_hard") cfg.pen_hard = parse_double(value);
    else if (key == "pen_soft") cfg.pen_soft = parse_double(value);
    else if (key == "delta_pen") cfg.delta_pen = parse_double(value);
    else if (key == "p_static") cfg.p_static = parse_double(value);
    else if (key == "p_max") cfg.p_max = parse_double(value);
    else if (key == "grid_size") cfg.grid_size = parse_int(value);
    else if (key == "horizon") cfg.horizon = parse_int(value);
    else if (key == "u_max_per_task") cfg.u_max_per_task = parse_double(value);
    else if (key == "lambda_e") cfg.lambda_e = parse_double(value);
    else if (key == "lambda_dis") cfg.lambda_dis = parse_double(value);
    else if (key == "energy_model" || key == "energy-model") {
      if (value == "cubic") cfg.energy_model = EnergyModel::kCubic;
      else if (value == "literal") cfg.energy_model = EnergyModel::kLiteral;
      else throw ConfigError("energy_model must be 'cubic' or 'literal'");
    } else if (key == "cc_latency") cfg.cc_latency = parse_int(value);
    else if (key == "local_scan_step") cfg.local_scan_step = parse_double(value);
    else if (key == "local_u_grid") cfg.local_u_grid = parse_list(value);
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const ParseError& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

VecsConfig read_config(std::istream& in, VecsConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(base, t.substr(0, eq), t.substr(eq + 1));
  }
  base.validate();
  return base;
}

void write_config(std::ostream& out, const VecsConfig& cfg) {
  for (const auto& [k, v] : to_key_values(cfg)) out << k << '=' << v << '\n';
}

}  // namespace vecs
