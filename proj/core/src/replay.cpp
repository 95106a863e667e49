#include "vecs/replay.hpp"

#include <algorithm>
#include <unordered_map>

#include "vecs/errors.hpp"

namespace vecs {

namespace {

struct Live {
  BsId bs = kNoBs;
  MicroCores micro = 0;
  Time start = 0;
  Time finish = 0;
};

Time detail_time(const Event& e, const char* key) {
  const std::string v = detail_value(e.detail, key);
  if (v.empty()) throw ParseError(std::string("event missing '") + key + "': " + e.detail);
  return parse_int(v);
}

Time horizon_of(const EventLog& log) {
  for (const auto& e : log.events()) {
    if (e.kind == EventKind::kBegin) return detail_time(e, "horizon");
  }
  throw ParseError("log has no BEGIN event");
}

std::vector<MicroCores>& calendar(std::vector<std::vector<MicroCores>>& cals, BsId bs) {
  if (bs < 0 || static_cast<std::size_t>(bs) >= cals.size()) {
    throw ParseError("event references unknown station " + std::to_string(bs));
  }
  return cals[static_cast<std::size_t>(bs)];
}

}  // namespace

ReplayResult replay(const Scenario& scenario, const EventLog& log) {
  ReplayResult out;
  out.horizon = horizon_of(log);
  out.calendars.assign(scenario.stations.size(), std::vector<MicroCores>(static_cast<std::size_t>(out.horizon), 0));

  std::unordered_map<TaskId, std::size_t> index;
  std::vector<TaskOutcome> outcomes;
  for (const auto& t : scenario.tasks) {
    index.emplace(t.id, outcomes.size());
    outcomes.push_back({t.id, t.flag, kNoBs, false, false, 0.0});
  }
  auto outcome = [&](TaskId id) -> TaskOutcome& {
    auto it = index.find(id);
    if (it == index.end()) throw ParseError("event references unknown task " + std::to_string(id));
    return outcomes[it->second];
  };

  std::unordered_map<TaskId, Live> live;
  for (const auto& e : log.events()) {
    switch (e.kind) {
      case EventKind::kAlloc: {
        Live l{e.bs, to_micro(e.u), detail_time(e, "start"), detail_time(e, "finish")};
        auto& cal = calendar(out.calendars, e.bs);
        if (l.finish > static_cast<Time>(cal.size())) throw ParseError("allocation beyond horizon");
        for (Time t = l.start; t < l.finish; ++t) cal[static_cast<std::size_t>(t)] += l.micro;
        live[e.task] = l;
        TaskOutcome& o = outcome(e.task);
        o.bs = e.bs;
        o.scheduled = true;
        o.distance = parse_double(detail_value(e.detail, "dist"));
        break;
      }
      case EventKind::kEvict: {
        auto it = live.find(e.task);
        if (it == live.end()) throw ParseError("eviction of unknown allocation " + std::to_string(e.task));
        auto& cal = calendar(out.calendars, it->second.bs);
        for (Time t = detail_time(e, "released"); t < it->second.finish; ++t) {
          cal[static_cast<std::size_t>(t)] -= it->second.micro;
        }
        live.erase(it);
        outcome(e.task).dropped = true;
        break;
      }
      case EventKind::kCloud: {
        TaskOutcome& o = outcome(e.task);
        o.bs = kCloudBs;
        o.scheduled = true;
        o.distance = parse_double(detail_value(e.detail, "dist"));
        break;
      }
      default: break;
    }
  }

  out.ledger.outcomes = std::move(outcomes);
  settle(out.ledger, scenario.cfg);
  out.ledger.c_e = energy_cost(out.calendars, out.horizon, scenario.cfg);
  out.c_total = total_cost(out.ledger);
  return out;
}

AuditReport audit(const Scenario& scenario, const EventLog& log, bool global_cap_applies) {
  AuditReport report;
  const VecsConfig& cfg = scenario.cfg;
  const Time horizon = horizon_of(log);
  std::vector<std::vector<MicroCores>> cals(scenario.stations.size(),
                                            std::vector<MicroCores>(static_cast<std::size_t>(horizon), 0));
  std::unordered_map<TaskId, const Task*> tasks;
  for (const auto& t : scenario.tasks) tasks.emplace(t.id, &t);

  const MicroCores cap = to_micro(cfg.u_max_bs);
  const MicroCores threshold = to_micro(cfg.u_threshold);
  const MicroCores hat = to_micro(cfg.u_hat_max * cfg.u_max_bs);

  std::unordered_map<TaskId, Live> live;
  std::unordered_map<TaskId, int> placements;
  std::unordered_map<TaskId, bool> local;
  auto flag = [&](const Event& e, const std::string& what) {
    report.violations.push_back("t=" + std::to_string(e.time) + " task " + std::to_string(e.task) + ": " + what);
  };

  for (const auto& e : log.events()) {
    const auto it = tasks.find(e.task);
    const Task* task = it == tasks.end() ? nullptr : it->second;
    switch (e.kind) {
      case EventKind::kAlloc: {
        if (!task) { flag(e, "unknown task"); break; }
        const bool is_local = detail_value(e.detail, "mode") == "local";
        Live l{e.bs, to_micro(e.u), detail_time(e, "start"), detail_time(e, "finish")};
        if (++placements[e.task] > 1) flag(e, "placed more than once");
        if (l.finish > task->deadline) flag(e, "finishes after its deadline");
        if (l.start < e.time + cfg.delta_latency) flag(e, "starts before the decision latency elapsed");
        if (e.bs < 0 || static_cast<std::size_t>(e.bs) >= cals.size() || l.finish > horizon) {
          flag(e, "invalid station or window");
          break;
        }
        auto& cal = cals[static_cast<std::size_t>(e.bs)];
        const MicroCores admit = is_local ? threshold : (global_cap_applies ? hat : cap);
        bool over_admit = false;
        bool over_cap = false;
        for (Time t = l.start; t < l.finish; ++t) {
          auto& slot = cal[static_cast<std::size_t>(t)];
          slot += l.micro;
          over_admit = over_admit || slot > admit;
          over_cap = over_cap || slot > cap;
        }
        if (over_cap) flag(e, "station capacity exceeded");
        else if (over_admit) flag(e, is_local ? "local admission above threshold" : "global placement above cap");
        live[e.task] = l;
        local[e.task] = is_local;
        break;
      }
      case EventKind::kEvict: {
        if (task && task->is_hard()) flag(e, "hard task evicted");
        auto lit = live.find(e.task);
        if (lit == live.end()) { flag(e, "eviction without allocation"); break; }
        auto& cal = cals[static_cast<std::size_t>(lit->second.bs)];
        for (Time t = detail_time(e, "released"); t < lit->second.finish; ++t) {
          cal[static_cast<std::size_t>(t)] -= lit->second.micro;
        }
        live.erase(lit);
        break;
      }
      case EventKind::kCloud:
        if (++placements[e.task] > 1) flag(e, "placed more than once");
        if (task && detail_time(e, "finish") > task->deadline) flag(e, "cloud finishes after its deadline");
        break;
      case EventKind::kTea:
        if (local[e.task]) flag(e, "TEA for a locally admitted task");
        break;
      case EventKind::kComplete: {
        auto lit = live.find(e.task);
        if (lit == live.end()) { flag(e, "completion without allocation"); break; }
        if (task && lit->second.finish > task->deadline) flag(e, "completed after its deadline");
        if (e.time < lit->second.finish) flag(e, "completed before its finish slot");
        live.erase(lit);
        break;
      }
      default: break;
    }
  }
  return report;
}

}  // namespace vecs
