#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vecs/config.hpp"
#include "vecs/types.hpp"

namespace vecs {

enum class AllocationState : std::uint8_t { kReserved, kExecuting, kCompleted, kDropped };

/// A task's reservation on one base station.
struct Allocation {
  TaskId task = 0;
  BsId bs = kNoBs;
  double utilisation = 0.0;
  MicroCores micro = 0;
  Time start = 0;
  /// Stretched processing time p', whole slots.
  Time processing = 0;
  Time finish = 0;
  AllocationState state = AllocationState::kReserved;
  bool global_mode = false;
  /// Set when the allocation was dropped: first slot no longer occupied.
  Time released_at = 0;
};

/// Minimum utilisation p / (d - start). Throws InfeasibleStartError when
/// start >= deadline. Values above u_max are returned as-is; callers treat
/// them as infeasible at this start.
double min_utilisation(const Task& task, Time start);

/// ceil(u * (d - start)), clamped to >= p. Throws UtilisationTooLowError when
/// u is below min_utilisation and InfeasibleStartError if the result would
/// overrun the deadline.
Time stretched_processing(const Task& task, Time start, double utilisation);

/// Power drawn by one station at committed load `committed` (cores).
double instantaneous_power(double committed, const VecsConfig& cfg);

/// Sum over slots [0, horizon) and stations of instantaneous_power. Each
/// calendar holds per-slot loads in micro-cores; slots past a calendar's end
/// count as idle.
double energy_cost(std::span<const std::vector<MicroCores>> calendars, Time horizon,
                   const VecsConfig& cfg);

double offload_distance(Point av, Point bs);

enum class SlackClass : std::uint8_t { kTight, kNormal, kLoose };

/// (d - a) / p
double slack(const Task& task);
SlackClass slack_class(const Task& task);
const char* to_string(SlackClass c);

/// Per-task indicator record: y = scheduled somewhere (BS or cloud),
/// z = dropped after being scheduled.
struct TaskOutcome {
  TaskId task = 0;
  Criticality flag = Criticality::kSoft;
  BsId bs = kNoBs;
  bool scheduled = false;
  bool dropped = false;
  double distance = 0.0;
};

/// Penalty of one outcome: (1+delta)*pen when never scheduled or dropped,
/// 0 when completed. Throws LedgerCorruptionError on z without y.
double drop_penalty(const TaskOutcome& outcome, const VecsConfig& cfg);
double drop_penalty(std::span<const TaskOutcome> outcomes, const VecsConfig& cfg);

/// Penalty of dropping every task in the set; used as a plot normaliser.
double drop_all_penalty(std::span<const Task> tasks, const VecsConfig& cfg);

struct CostLedger {
  double c_drop = 0.0;
  double c_dis = 0.0;
  double c_e = 0.0;
  double lambda_e = 0.0;
  double lambda_dis = 0.0;
  std::vector<TaskOutcome> outcomes;
};

/// c_drop + lambda_dis * c_dis + lambda_e * c_e
double total_cost(const CostLedger& ledger);

/// Fills c_drop and c_dis of a ledger from its outcome records (in record order).
void settle(CostLedger& ledger, const VecsConfig& cfg);

}  // namespace vecs
