#include "vecs/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "vecs/errors.hpp"
#include "vecs/policy.hpp"

namespace vecs {

namespace {

constexpr double kUtilSlack = 1e-12;
constexpr double kDistSlack = 1e-9;

constexpr std::array<PolicyId, 4> kPolicies = {PolicyId::kSelfishHolding, PolicyId::kNearest,
                                               PolicyId::kDynamicHolding, PolicyId::kBaruahBaseline};

Time round_up(Time t, Time step) { return ((t + step - 1) / step) * step; }

std::string detail(std::initializer_list<std::pair<const char*, std::string>> items) {
  std::string out;
  for (const auto& [k, v] : items) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

void log_message(EngineState& state, const Message& m, Time when) {
  EventKind kind = EventKind::kTor;
  switch (m.kind) {
    case MessageKind::kTor: kind = EventKind::kTor; break;
    case MessageKind::kToa: kind = EventKind::kToa; break;
    case MessageKind::kNack: kind = EventKind::kNack; break;
    case MessageKind::kTsr: kind = EventKind::kTsr; break;
    case MessageKind::kTea: kind = EventKind::kTea; break;
  }
  std::string info = detail({{"av", std::to_string(m.av)}});
  if (m.kind == MessageKind::kTsr) {
    info = detail({{"av", std::to_string(m.av)},
                   {"x", format_double(m.av_loc.x)},
                   {"y", format_double(m.av_loc.y)}});
  } else if (m.kind == MessageKind::kTea || m.kind == MessageKind::kToa) {
    info = detail({{"av", std::to_string(m.av)}, {"start", std::to_string(m.start)}});
  }
  state.log.append({when, kind, m.task, m.bs, m.utilisation, std::move(info)});
}

void resolve(EngineState& state, std::size_t index) {
  if (state.resolved[index]) {
    throw InternalFault("task " + std::to_string(state.tasks[index].id) + " resolved twice");
  }
  state.resolved[index] = true;
}

// Utilisations scanned by local admission, descending, ending at u_min.
std::vector<double> local_scan(const VecsConfig& cfg, double u_min) {
  std::vector<double> values;
  if (!cfg.local_u_grid.empty()) {
    for (double u : cfg.local_u_grid) {
      if (u > u_min + kUtilSlack) values.push_back(u);
    }
  } else {
    const auto steps = static_cast<int>(std::floor(1.0 / cfg.local_scan_step + 1e-9));
    for (int k = 0; k <= steps; ++k) {
      const double u = std::round((1.0 - k * cfg.local_scan_step) * 1e9) / 1e9;
      if (u > u_min + kUtilSlack) values.push_back(u);
    }
  }
  if (u_min <= 1.0 + kUtilSlack) values.push_back(std::min(u_min, 1.0));
  return values;
}

}  // namespace

const char* to_string(PolicyId id) {
  switch (id) {
    case PolicyId::kSelfishHolding: return "selfish_holding";
    case PolicyId::kNearest: return "nearest";
    case PolicyId::kDynamicHolding: return "dynamic_holding";
    case PolicyId::kBaruahBaseline: return "baruah_baseline";
  }
  return "?";
}

PolicyId parse_policy(const std::string& name) {
  for (PolicyId id : kPolicies) {
    if (name == to_string(id)) return id;
  }
  throw ConfigError("unknown policy '" + name +
                    "' (selfish_holding|nearest|dynamic_holding|baruah_baseline)");
}

std::span<const PolicyId> all_policies() { return kPolicies; }

MicroCores Station::load_at(Time t) const {
  if (t < 0 || static_cast<std::size_t>(t) >= load.size()) return 0;
  return load[static_cast<std::size_t>(t)];
}

MicroCores Station::peak(Time from, Time to) const {
  MicroCores best = 0;
  for (Time t = from; t < to; ++t) best = std::max(best, load_at(t));
  return best;
}

bool Station::fits(Time from, Time to, MicroCores add, MicroCores limit) const {
  if (from < 0 || static_cast<std::size_t>(to) > load.size()) return false;
  for (Time t = from; t < to; ++t) {
    if (load[static_cast<std::size_t>(t)] + add > limit) return false;
  }
  return true;
}

std::size_t EngineState::index(TaskId id) const {
  auto it = index_of.find(id);
  if (it == index_of.end()) throw ContractViolation("unknown task id " + std::to_string(id));
  return it->second;
}

Time EngineState::earliest_start(Time decided_at) const {
  return round_up(decided_at + cfg.delta_latency, cfg.t_beta);
}

MicroCores EngineState::capacity_micro() const { return to_micro(cfg.u_max_bs); }

EngineState make_state(const Scenario& scenario, PolicyId policy) {
  scenario.validate();
  EngineState state;
  state.cfg = scenario.cfg;
  state.policy = policy;

  Time last_deadline = 0;
  for (const auto& t : scenario.tasks) last_deadline = std::max(last_deadline, t.deadline);
  state.horizon = std::max(scenario.cfg.horizon, round_up(last_deadline, scenario.cfg.t_beta));

  // Per-vehicle location tables, sorted by batch, for snapshot lookups.
  std::unordered_map<AvId, std::vector<std::pair<std::int64_t, Point>>> tables;
  for (const auto& e : scenario.av_locations) tables[e.av].emplace_back(e.batch, e.loc);
  for (auto& [av, rows] : tables) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
  }

  state.tasks = scenario.tasks;
  const std::size_t n = state.tasks.size();
  state.request_loc.resize(n);
  state.allocation_of.assign(n, -1);
  state.resolved.assign(n, false);
  state.outcomes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Task& t = state.tasks[i];
    state.index_of.emplace(t.id, i);
    const auto& rows = tables.at(t.origin_av);
    const std::int64_t batch = batch_of(t.arrival, state.cfg.t_beta);
    auto it = std::upper_bound(rows.begin(), rows.end(), batch,
                               [](std::int64_t b, const auto& row) { return b < row.first; });
    state.request_loc[i] = std::prev(it)->second;
    state.outcomes[i] = TaskOutcome{t.id, t.flag, kNoBs, false, false, 0.0};
  }

  for (const auto& b : scenario.stations) {
    Station st;
    st.id = b.id;
    st.loc = b.loc;
    st.load.assign(static_cast<std::size_t>(state.horizon), 0);
    state.stations.push_back(std::move(st));
  }
  state.log.append({0, EventKind::kBegin, -1, kNoBs, 0.0,
                    detail({{"horizon", std::to_string(state.horizon)},
                            {"stations", std::to_string(state.stations.size())},
                            {"policy", to_string(policy)}})});
  return state;
}

TryScheduleResult try_schedule(const EngineState& state, BsId bs, const Task& task, double utilisation,
                               Time decided_at, const ScheduleCaps& caps) {
  TryScheduleResult result;
  const Time start = state.earliest_start(decided_at);
  result.start = start;
  if (start + task.min_processing > task.deadline) return result;
  const double u_min = min_utilisation(task, start);
  if (utilisation < u_min - kUtilSlack || utilisation > 1.0 + kUtilSlack) return result;
  const Station& st = state.stations.at(static_cast<std::size_t>(bs));
  const double distance = offload_distance(state.request_loc[state.index(task.id)], st.loc);
  if (caps.radius && distance > *caps.radius + kDistSlack) return result;
  const Time processing = stretched_processing(task, start, utilisation);
  const Time finish = start + processing;
  result.processing = processing;
  result.finish = finish;
  if (finish > task.deadline) return result;
  const MicroCores add = to_micro(utilisation);
  if (!st.fits(start, finish, add, caps.limit)) return result;
  double delta = 0.0;
  for (Time t = start; t < finish; ++t) {
    const MicroCores now = st.load[static_cast<std::size_t>(t)];
    delta += instantaneous_power(from_micro(now + add), state.cfg) - instantaneous_power(from_micro(now), state.cfg);
  }
  result.feasible = true;
  result.delta_energy = delta;
  result.distance = distance;
  return result;
}

const Allocation& schedule(EngineState& state, BsId bs, const Task& task, double utilisation,
                           Time decided_at, bool global_mode) {
  const std::size_t index = state.index(task.id);
  if (state.allocation_of[index] >= 0 || state.resolved[index]) {
    throw InternalFault("task " + std::to_string(task.id) + " scheduled twice");
  }
  const Time start = state.earliest_start(decided_at);
  const Time processing = stretched_processing(task, start, utilisation);
  const Time finish = start + processing;
  Station& st = state.stations.at(static_cast<std::size_t>(bs));
  const MicroCores add = to_micro(utilisation);
  if (!st.fits(start, finish, add, state.capacity_micro())) {
    throw InternalFault("capacity race scheduling task " + std::to_string(task.id) + " on station " +
                        std::to_string(bs));
  }
  for (Time t = start; t < finish; ++t) st.load[static_cast<std::size_t>(t)] += add;

  Allocation a;
  a.task = task.id;
  a.bs = bs;
  a.utilisation = utilisation;
  a.micro = add;
  a.start = start;
  a.processing = processing;
  a.finish = finish;
  a.state = AllocationState::kReserved;
  a.global_mode = global_mode;
  const std::size_t alloc_index = state.allocations.size();
  state.allocations.push_back(a);
  st.active.push_back(alloc_index);
  state.allocation_of[index] = static_cast<std::int64_t>(alloc_index);

  TaskOutcome& o = state.outcomes[index];
  o.bs = bs;
  o.scheduled = true;
  o.distance = offload_distance(state.request_loc[index], st.loc);
  if (global_mode) ++state.counts.global_admissions;
  else ++state.counts.local_admissions;

  state.log.append({decided_at, EventKind::kAlloc, task.id, bs, utilisation,
                    detail({{"mode", global_mode ? "global" : "local"},
                            {"start", std::to_string(start)},
                            {"finish", std::to_string(finish)},
                            {"dist", format_double(o.distance)}})});
  return state.allocations.back();
}

void evict(EngineState& state, std::size_t allocation, Time when, TaskId for_task) {
  Allocation& a = state.allocations.at(allocation);
  const std::size_t index = state.index(a.task);
  if (state.tasks[index].is_hard()) {
    throw ContractViolation("hard task " + std::to_string(a.task) + " cannot be evicted");
  }
  if (a.state != AllocationState::kReserved && a.state != AllocationState::kExecuting) {
    throw ContractViolation("allocation of task " + std::to_string(a.task) + " is not live");
  }
  Station& st = state.stations.at(static_cast<std::size_t>(a.bs));
  const Time from = std::max(when, a.start);
  for (Time t = from; t < a.finish; ++t) st.load[static_cast<std::size_t>(t)] -= a.micro;
  a.state = AllocationState::kDropped;
  a.released_at = from;
  std::erase(st.active, allocation);
  state.outcomes[index].dropped = true;
  resolve(state, index);
  ++state.counts.evicted_soft;
  ++state.counts.dropped_soft;
  state.log.append({when, EventKind::kEvict, a.task, a.bs, a.utilisation,
                    detail({{"for", std::to_string(for_task)}, {"released", std::to_string(from)}})});
}

void drop_unscheduled(EngineState& state, std::size_t task_index, Time when, const std::string& reason) {
  const Task& t = state.tasks[task_index];
  if (state.outcomes[task_index].scheduled) {
    throw InternalFault("task " + std::to_string(t.id) + " dropped as unscheduled after scheduling");
  }
  resolve(state, task_index);
  if (t.is_hard()) ++state.counts.dropped_hard;
  else ++state.counts.dropped_soft;
  state.log.append({when, EventKind::kDrop, t.id, kNoBs, 0.0,
                    detail({{"reason", reason}, {"class", std::string(1, criticality_code(t.flag))}})});
}

std::optional<double> bs_local_admit(const EngineState& state, BsId bs, const Message& tor) {
  if (tor.kind != MessageKind::kTor) throw ContractViolation("local admission expects a TOR");
  const std::size_t index = state.index(tor.task);
  const Task& task = state.tasks[index];
  const Time start = state.earliest_start(task.arrival);
  if (start + task.min_processing > task.deadline) return std::nullopt;
  const double u_min = min_utilisation(task, start);
  const Station& st = state.stations.at(static_cast<std::size_t>(bs));
  const MicroCores threshold = to_micro(state.cfg.u_threshold);
  for (double u : local_scan(state.cfg, u_min)) {
    const Time finish = start + stretched_processing(task, start, u);
    if (finish <= task.deadline && st.fits(start, finish, to_micro(u), threshold)) return u;
  }
  return std::nullopt;
}

LocalOutcome av_offer_phase(EngineState& state, std::size_t task_index) {
  const Task task = state.tasks[task_index];
  const Point av_loc = state.request_loc[task_index];
  const Time now = task.arrival;

  std::vector<std::pair<double, BsId>> in_range;
  for (const auto& st : state.stations) {
    const double d = offload_distance(av_loc, st.loc);
    if (d <= state.cfg.d_hat_max + kDistSlack) in_range.emplace_back(d, st.id);
  }
  std::sort(in_range.begin(), in_range.end());

  std::vector<std::pair<BsId, double>> accepted;
  for (const auto& [dist, bs] : in_range) {
    Message tor{MessageKind::kTor, task.id, bs, task.origin_av, av_loc, 0.0, 0};
    log_message(state, tor, now);
    if (auto u = bs_local_admit(state, bs, tor)) accepted.emplace_back(bs, *u);
  }

  if (!accepted.empty()) {
    const Time start = state.earliest_start(now);
    // TOAs arrive in distance order; the first one wins.
    for (const auto& [bs, u] : accepted) {
      log_message(state, {MessageKind::kToa, task.id, bs, task.origin_av, av_loc, u, start}, now);
    }
    for (std::size_t k = 1; k < accepted.size(); ++k) {
      log_message(state, {MessageKind::kNack, task.id, accepted[k].first, task.origin_av, av_loc, 0.0, 0}, now);
    }
    schedule(state, accepted.front().first, task, accepted.front().second, now, false);
    return LocalOutcome::kAdmitted;
  }

  const BsId via = nearest_station(state, av_loc);
  log_message(state, {MessageKind::kTsr, task.id, via, task.origin_av, av_loc, 0.0, 0}, now);
  state.pending_tsr.push_back(task_index);
  return LocalOutcome::kEscalated;
}

void cs_batch_schedule(EngineState& state) {
  const Time now = state.clock;
  auto arrived = std::stable_partition(state.pending_tsr.begin(), state.pending_tsr.end(),
                                       [&](std::size_t i) { return state.tasks[i].arrival < now; });
  state.queue.insert(state.queue.end(), state.pending_tsr.begin(), arrived);
  state.pending_tsr.erase(state.pending_tsr.begin(), arrived);
  if (state.queue.empty()) return;

  std::sort(state.queue.begin(), state.queue.end(), [&](std::size_t x, std::size_t y) {
    const Task& a = state.tasks[x];
    const Task& b = state.tasks[y];
    if (a.is_hard() != b.is_hard()) return a.is_hard();
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.id < b.id;
  });

  const Time start = state.earliest_start(now);
  std::vector<std::size_t> waiting;
  for (std::size_t index : state.queue) {
    const Task& task = state.tasks[index];
    if (start + task.min_processing > task.deadline) {
      waiting.push_back(index);
      continue;
    }
    const PolicyOutcome outcome = apply_policy(state.policy, state, index);
    if (outcome == PolicyOutcome::kNotPlaced) {
      waiting.push_back(index);
      continue;
    }
    const Allocation& a = state.allocations.at(static_cast<std::size_t>(state.allocation_of[index]));
    log_message(state,
                {MessageKind::kTea, task.id, a.bs, task.origin_av, state.request_loc[index], a.utilisation, a.start},
                now);
  }

  // Centralized cloud: anything it can still finish in time leaves the queue.
  std::vector<std::size_t> remaining;
  for (std::size_t index : waiting) {
    const Task& task = state.tasks[index];
    const Time cloud_finish = now + state.cfg.cc_latency + task.min_processing;
    if (cloud_finish > task.deadline) {
      remaining.push_back(index);
      continue;
    }
    TaskOutcome& o = state.outcomes[index];
    o.bs = kCloudBs;
    o.scheduled = true;
    o.distance = 2.0 * state.cfg.d_hat_max;
    resolve(state, index);
    if (task.is_hard()) ++state.counts.cloud_hard;
    else ++state.counts.cloud_soft;
    state.log.append({now, EventKind::kCloud, task.id, kCloudBs, 1.0,
                      detail({{"finish", std::to_string(cloud_finish)}, {"dist", format_double(o.distance)}})});
  }

  // Tasks that cannot start by the next batch are charged once and removed.
  const Time next_start = state.earliest_start(now + state.cfg.t_beta);
  state.queue.clear();
  for (std::size_t index : remaining) {
    const Task& task = state.tasks[index];
    if (next_start + task.min_processing > task.deadline) {
      drop_unscheduled(state, index, now, "expired");
    } else {
      state.queue.push_back(index);
    }
  }
}

void execute_and_complete(EngineState& state) {
  const Time now = state.clock;
  std::vector<std::size_t> done;
  for (auto& st : state.stations) {
    for (std::size_t idx : st.active) {
      Allocation& a = state.allocations[idx];
      if (a.state == AllocationState::kReserved && a.start <= now) a.state = AllocationState::kExecuting;
      if (a.finish <= now) done.push_back(idx);
    }
  }
  std::sort(done.begin(), done.end(), [&](std::size_t x, std::size_t y) {
    const Allocation& a = state.allocations[x];
    const Allocation& b = state.allocations[y];
    return a.finish != b.finish ? a.finish < b.finish : a.task < b.task;
  });
  for (std::size_t idx : done) {
    Allocation& a = state.allocations[idx];
    a.state = AllocationState::kCompleted;
    std::erase(state.stations[static_cast<std::size_t>(a.bs)].active, idx);
    const std::size_t index = state.index(a.task);
    resolve(state, index);
    if (state.tasks[index].is_hard()) ++state.counts.completed_hard;
    else ++state.counts.completed_soft;
    state.log.append({now, EventKind::kComplete, a.task, a.bs, a.utilisation,
                      detail({{"finish", std::to_string(a.finish)}})});
  }
}

RunReport run(const Scenario& scenario, PolicyId policy) {
  EngineState state = make_state(scenario, policy);
  const Time step = state.cfg.t_beta;

  std::vector<std::size_t> arrivals(state.tasks.size());
  for (std::size_t i = 0; i < arrivals.size(); ++i) arrivals[i] = i;
  std::stable_sort(arrivals.begin(), arrivals.end(), [&](std::size_t x, std::size_t y) {
    const Task& a = state.tasks[x];
    const Task& b = state.tasks[y];
    return a.arrival != b.arrival ? a.arrival < b.arrival : a.id < b.id;
  });

  std::size_t cursor = 0;
  auto idle = [&] {
    if (cursor < arrivals.size() || !state.queue.empty() || !state.pending_tsr.empty()) return false;
    for (const auto& st : state.stations) {
      if (!st.active.empty()) return false;
    }
    return true;
  };

  for (Time now = 0;; now += step) {
    state.clock = now;
    execute_and_complete(state);
    cs_batch_schedule(state);
    while (cursor < arrivals.size() && state.tasks[arrivals[cursor]].arrival < now + step) {
      av_offer_phase(state, arrivals[cursor]);
      ++cursor;
    }
    if (now >= state.horizon && idle()) break;
    if (now > state.horizon + 4 * step) throw InternalFault("simulation overran its horizon");
  }
  for (std::size_t i = 0; i < state.tasks.size(); ++i) {
    if (!state.resolved[i]) throw InternalFault("task " + std::to_string(state.tasks[i].id) + " never resolved");
  }

  RunReport report;
  report.policy = policy;
  report.horizon = state.horizon;
  report.counts = state.counts;
  report.ledger.outcomes = state.outcomes;
  settle(report.ledger, state.cfg);
  std::vector<std::vector<MicroCores>> calendars;
  calendars.reserve(state.stations.size());
  for (const auto& st : state.stations) calendars.push_back(st.load);
  report.ledger.c_e = energy_cost(calendars, state.horizon, state.cfg);
  report.c_total = total_cost(report.ledger);

  const double cap = static_cast<double>(state.capacity_micro());
  for (Time b = 0; b < state.horizon; b += step) {
    MicroCores peak = 0;
    for (const auto& st : state.stations) peak = std::max(peak, st.peak(b, std::min(b + step, state.horizon)));
    report.batch_peak_utilisation.push_back(static_cast<double>(peak) / cap);
  }

  state.log.append({state.clock, EventKind::kEnd, -1, kNoBs, 0.0,
                    detail({{"c_drop", format_double(report.ledger.c_drop)},
                            {"c_e", format_double(report.ledger.c_e)},
                            {"c_dis", format_double(report.ledger.c_dis)},
                            {"c_total", format_double(report.c_total)}})});
  report.allocations = std::move(state.allocations);
  report.log = std::move(state.log);
  report.assumptions = {
      "centralized cloud: unbounded capacity, completes a task iff T_c + cc_latency + p <= d, charged distance 2*d_hat_max and no station energy",
      "expired tasks are charged once, as soon as they can no longer start on any station",
  };
  if (policy == PolicyId::kBaruahBaseline) {
    report.assumptions.emplace_back("baseline ignores u_hat_max and d_hat_max; only the hard U^max cap applies");
  }
  return report;
}

void write_report(std::ostream& out, const RunReport& r) {
  out << "policy=" << to_string(r.policy) << '\n';
  out << "horizon=" << r.horizon << '\n';
  out << "c_drop=" << format_double(r.ledger.c_drop) << '\n';
  out << "c_e=" << format_double(r.ledger.c_e) << '\n';
  out << "c_dis=" << format_double(r.ledger.c_dis) << '\n';
  out << "lambda_e=" << format_double(r.ledger.lambda_e) << '\n';
  out << "lambda_dis=" << format_double(r.ledger.lambda_dis) << '\n';
  out << "c_total=" << format_double(r.c_total) << '\n';
  const RunCounts& c = r.counts;
  out << "completed_hard=" << c.completed_hard << '\n';
  out << "completed_soft=" << c.completed_soft << '\n';
  out << "cloud_hard=" << c.cloud_hard << '\n';
  out << "cloud_soft=" << c.cloud_soft << '\n';
  out << "dropped_hard=" << c.dropped_hard << '\n';
  out << "dropped_soft=" << c.dropped_soft << '\n';
  out << "evicted_soft=" << c.evicted_soft << '\n';
  out << "local_admissions=" << c.local_admissions << '\n';
  out << "global_admissions=" << c.global_admissions << '\n';
  for (const auto& a : r.assumptions) out << "assumption=" << a << '\n';
  out << "batch_peak_utilisation=";
  for (std::size_t i = 0; i < r.batch_peak_utilisation.size(); ++i) {
    if (i) out << ',';
    out << format_double(r.batch_peak_utilisation[i]);
  }
  out << '\n';
}

}  // namespace vecs
