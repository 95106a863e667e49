#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vecs/config.hpp"
#include "vecs/event_log.hpp"
#include "vecs/model.hpp"
#include "vecs/scenario.hpp"
#include "vecs/types.hpp"

namespace vecs {

enum class PolicyId : std::uint8_t {
  kSelfishHolding,
  kNearest,
  kDynamicHolding,
  kBaruahBaseline,
};

const char* to_string(PolicyId id);
/// Throws ConfigError for unknown names.
PolicyId parse_policy(const std::string& name);
std::span<const PolicyId> all_policies();

enum class MessageKind : std::uint8_t { kTor, kToa, kNack, kTsr, kTea };

/// Protocol message between a vehicle, base stations and the central
/// scheduler. TEA carries (station, vehicle, utilisation, start batch).
struct Message {
  MessageKind kind = MessageKind::kTor;
  TaskId task = 0;
  BsId bs = kNoBs;
  AvId av = 0;
  Point av_loc;
  double utilisation = 0.0;
  Time start = 0;
};

/// A base station and its capacity calendar.
struct Station {
  BsId id = 0;
  Point loc;
  /// Committed load per slot over [0, horizon), micro-cores.
  std::vector<MicroCores> load;
  /// Indices into EngineState::allocations that are reserved or executing.
  std::vector<std::size_t> active;

  MicroCores load_at(Time t) const;
  /// Max load over [from, to).
  MicroCores peak(Time from, Time to) const;
  bool fits(Time from, Time to, MicroCores add, MicroCores limit) const;
};

struct RunCounts {
  std::int64_t completed_hard = 0;
  std::int64_t completed_soft = 0;
  std::int64_t dropped_hard = 0;
  std::int64_t dropped_soft = 0;
  std::int64_t evicted_soft = 0;
  std::int64_t cloud_hard = 0;
  std::int64_t cloud_soft = 0;
  std::int64_t local_admissions = 0;
  std::int64_t global_admissions = 0;
};

struct EngineState {
  VecsConfig cfg;
  PolicyId policy = PolicyId::kDynamicHolding;
  Time clock = 0;
  Time horizon = 0;

  std::vector<Task> tasks;
  /// Vehicle location snapshot taken at request time, per task.
  std::vector<Point> request_loc;
  std::unordered_map<TaskId, std::size_t> index_of;

  std::vector<Station> stations;
  std::vector<Allocation> allocations;
  /// Allocation index per task, -1 when none.
  std::vector<std::int64_t> allocation_of;

  /// Global-mode queue (task indices).
  std::vector<std::size_t> queue;
  /// Tasks whose TSR reached the scheduler but are not queued yet.
  std::vector<std::size_t> pending_tsr;

  std::vector<TaskOutcome> outcomes;
  std::vector<bool> resolved;
  RunCounts counts;
  EventLog log;
  std::vector<double> batch_peak_utilisation;

  const Task& task(std::size_t index) const { return tasks[index]; }
  std::size_t index(TaskId id) const;
  /// First batch boundary at or after decided_at + delta.
  Time earliest_start(Time decided_at) const;
  MicroCores capacity_micro() const;
};

/// Builds the initial state for a scenario: calendars sized to the horizon,
/// request-time locations resolved, BEGIN logged.
EngineState make_state(const Scenario& scenario, PolicyId policy);

/// Capacity caps applied by one feasibility probe.
struct ScheduleCaps {
  MicroCores limit = 0;
  /// Offload radius; unlimited when empty.
  std::optional<double> radius;
};

struct TryScheduleResult {
  bool feasible = false;
  Time start = 0;
  Time processing = 0;
  Time finish = 0;
  /// Marginal energy and distance; empty when infeasible.
  std::optional<double> delta_energy;
  std::optional<double> distance;
};

/// Pure check: can `task` run on `bs` at `utilisation` when decided at
/// `decided_at`? Verifies u in [u_min, u_max], f <= d and the caps.
TryScheduleResult try_schedule(const EngineState& state, BsId bs, const Task& task,
                               double utilisation, Time decided_at, const ScheduleCaps& caps);

/// Reserves the calendar and records y = 1. The caller must have seen
/// try_schedule succeed; a capacity race throws InternalFault.
const Allocation& schedule(EngineState& state, BsId bs, const Task& task, double utilisation,
                           Time decided_at, bool global_mode);

/// Drops a reserved or executing allocation at `when`: frees its remaining
/// slots, sets z = 1 and logs the eviction. Hard allocations are refused.
void evict(EngineState& state, std::size_t allocation, Time when, TaskId for_task);

/// Marks a never-scheduled task as dropped (y = 0).
void drop_unscheduled(EngineState& state, std::size_t task_index, Time when,
                      const std::string& reason);

/// Local-mode admission at one station: scans utilisation from u_max down to
/// u_min and returns the first value that keeps the station within U^T.
std::optional<double> bs_local_admit(const EngineState& state, BsId bs, const Message& tor);

enum class LocalOutcome : std::uint8_t { kAdmitted, kEscalated };

/// Vehicle side of local mode for one task: TOR to every station in range,
/// picks the first TOA (nearest, then lowest id), NACKs the rest; otherwise
/// sends a TSR towards the scheduler.
LocalOutcome av_offer_phase(EngineState& state, std::size_t task_index);

/// Scheduler batch at the current clock: queue TSRs, order by criticality then
/// deadline, run the policy, offload to the cloud, expire hopeless tasks.
void cs_batch_schedule(EngineState& state);

/// Starts and completes allocations at the current batch boundary.
void execute_and_complete(EngineState& state);

struct RunReport {
  PolicyId policy = PolicyId::kDynamicHolding;
  CostLedger ledger;
  double c_total = 0.0;
  RunCounts counts;
  Time horizon = 0;
  std::vector<double> batch_peak_utilisation;
  std::vector<Allocation> allocations;
  EventLog log;
  std::vector<std::string> assumptions;
};

/// Runs a full simulation. Deterministic for a fixed (scenario, policy).
RunReport run(const Scenario& scenario, PolicyId policy);

/// Structured text summary: costs, counts, per-batch peak utilisation.
void write_report(std::ostream& out, const RunReport& report);

}  // namespace vecs
