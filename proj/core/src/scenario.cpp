#include "vecs/scenario.hpp"

#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "vecs/errors.hpp"

namespace vecs {

std::optional<Point> Scenario::av_location(AvId av, std::int64_t batch) const {
  std::optional<Point> best;
  std::int64_t best_batch = -1;
  for (const auto& entry : av_locations) {
    if (entry.av == av && entry.batch <= batch && entry.batch >= best_batch) {
      best = entry.loc;
      best_batch = entry.batch;
    }
  }
  return best;
}

void Scenario::validate() const {
  cfg.validate();
  auto in_grid = [&](Point p) {
    return p.x >= 0 && p.y >= 0 && p.x <= cfg.grid_size && p.y <= cfg.grid_size;
  };
  for (std::size_t j = 0; j < stations.size(); ++j) {
    if (stations[j].id != static_cast<BsId>(j)) {
      throw ParseError("station ids must be 0..M-1 in order (found " + std::to_string(stations[j].id) + ")");
    }
    if (!in_grid(stations[j].loc)) throw ParseError("station " + std::to_string(j) + " lies outside the grid");
  }
  for (const auto& entry : av_locations) {
    if (!in_grid(entry.loc)) throw ParseError("vehicle " + std::to_string(entry.av) + " lies outside the grid");
  }
  std::set<TaskId> ids;
  for (const auto& t : tasks) {
    if (!ids.insert(t.id).second) throw ParseError("duplicate task id " + std::to_string(t.id));
    if (!is_valid(t)) throw ParseError("task " + std::to_string(t.id) + " violates a < d, 1 <= p <= d - a");
    if (!av_location(t.origin_av, batch_of(t.arrival, cfg.t_beta))) {
      throw ParseError("task " + std::to_string(t.id) + ": vehicle " + std::to_string(t.origin_av) +
                       " has no location at its arrival batch");
    }
  }
}

void write_scenario(std::ostream& out, const Scenario& s) {
  out << "[CONFIG]\n";
  out << "seed=" << s.seed << '\n';
  write_config(out, s.cfg);
  out << "[BS]\n";
  for (const auto& b : s.stations) out << b.id << ',' << b.loc.x << ',' << b.loc.y << '\n';
  out << "[AV]\n";
  for (const auto& a : s.av_locations) {
    out << a.batch << ',' << a.av << ',' << a.loc.x << ',' << a.loc.y << '\n';
  }
  out << "[TASK]\n";
  for (const auto& t : s.tasks) {
    out << t.id << ',' << t.arrival << ',' << t.deadline << ',' << t.min_processing << ','
        << criticality_code(t.flag) << ',' << t.origin_av << '\n';
  }
}

Scenario read_scenario(std::istream& in) {
  Scenario s;
  enum class Section { kNone, kConfig, kBs, kAv, kTask } section = Section::kNone;
  std::string line;
  int line_no = 0;
  auto fields = [&](const std::string& text, std::size_t expected) {
    auto parts = split(text, ',');
    if (parts.size() != expected) {
      throw ParseError("scenario line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected) + " fields");
    }
    return parts;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t == "[CONFIG]") { section = Section::kConfig; continue; }
    if (t == "[BS]") { section = Section::kBs; continue; }
    if (t == "[AV]") { section = Section::kAv; continue; }
    if (t == "[TASK]") { section = Section::kTask; continue; }
    try {
      switch (section) {
        case Section::kNone:
          throw ParseError("scenario line " + std::to_string(line_no) + ": data before any section");
        case Section::kConfig: {
          const auto eq = t.find('=');
          if (eq == std::string::npos) throw ParseError("scenario line " + std::to_string(line_no) + ": expected key=value");
          const std::string key = trim(t.substr(0, eq));
          const std::string value = trim(t.substr(eq + 1));
          if (key == "seed") s.seed = static_cast<std::uint64_t>(std::stoull(value));
          else apply_setting(s.cfg, key, value);
          break;
        }
        case Section::kBs: {
          auto f = fields(t, 3);
          s.stations.push_back({static_cast<BsId>(parse_int(f[0])), {parse_int(f[1]), parse_int(f[2])}});
          break;
        }
        case Section::kAv: {
          auto f = fields(t, 4);
          s.av_locations.push_back(
              {parse_int(f[0]), static_cast<AvId>(parse_int(f[1])), {parse_int(f[2]), parse_int(f[3])}});
          break;
        }
        case Section::kTask: {
          auto f = fields(t, 6);
          Task task;
          task.id = parse_int(f[0]);
          task.arrival = parse_int(f[1]);
          task.deadline = parse_int(f[2]);
          task.min_processing = parse_int(f[3]);
          if (f[4] == "H") task.flag = Criticality::kHard;
          else if (f[4] == "S") task.flag = Criticality::kSoft;
          else throw ParseError("scenario line " + std::to_string(line_no) + ": flag must be H or S");
          task.origin_av = static_cast<AvId>(parse_int(f[5]));
          s.tasks.push_back(task);
          break;
        }
      }
    } catch (const ConfigError& e) {
      throw ParseError(std::string("scenario config: ") + e.what());
    } catch (const std::invalid_argument&) {
      throw ParseError("scenario line " + std::to_string(line_no) + ": bad number");
    } catch (const std::out_of_range&) {
      throw ParseError("scenario line " + std::to_string(line_no) + ": number out of range");
    }
  }
  s.validate();
  return s;
}

}  // namespace vecs
