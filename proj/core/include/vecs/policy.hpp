#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vecs/engine.hpp"

namespace vecs {

/// Immutable view handed to the station-selection step.
struct PlacementQuery {
  const Task* task = nullptr;
  double utilisation = 0.0;
  /// Decision time (current batch boundary).
  Time batch = 0;
  Point av_loc;
};

struct Placement {
  BsId bs = kNoBs;
  double utilisation = 0.0;
  double delta_energy = 0.0;
  double distance = 0.0;
  /// lambda_e * delta_energy + lambda_dis * distance
  double weighted_cost = 0.0;
};

/// Among stations within d_hat_max whose load stays under u_hat_max * U^max,
/// returns the one with the lowest price-weighted marginal cost; ties go to
/// the shorter distance, then the lower id.
std::optional<Placement> select_bs_and_utility(const EngineState& state, const PlacementQuery& q);

struct EvictionPlan {
  BsId bs = kNoBs;
  /// Allocation indices, ascending by task id.
  std::vector<std::size_t> victims;
  double penalty = 0.0;
};

/// Finds, over all stations, the smallest set of soft reservations whose
/// removal lets `task` run at its minimum utilisation under `limit`. Ties:
/// lower total penalty, then lower station id; within a station the
/// lexicographically smallest task-id set. Pure.
std::optional<EvictionPlan> find_eviction(const EngineState& state, const Task& task,
                                          Time decided_at, MicroCores limit);

/// Applies find_eviction and places the hard task at u_min. Returns the
/// station used, or nothing when no eviction set suffices anywhere.
/// Throws ContractViolation for soft tasks.
std::optional<BsId> drop_for_hard(EngineState& state, std::size_t task_index, MicroCores limit);

enum class PolicyOutcome : std::uint8_t { kScheduled, kScheduledWithEviction, kNotPlaced };

PolicyOutcome policy_selfish(EngineState& state, std::size_t task_index);
PolicyOutcome policy_nearest(EngineState& state, std::size_t task_index);
PolicyOutcome policy_dynamic(EngineState& state, std::size_t task_index);
PolicyOutcome policy_baruah(EngineState& state, std::size_t task_index);

PolicyOutcome apply_policy(PolicyId policy, EngineState& state, std::size_t task_index);

/// Nearest station to a point; ties to the lower id.
BsId nearest_station(const EngineState& state, Point p);

/// Load cap used by the given policy's global placements.
MicroCores global_limit(const EngineState& state, PolicyId policy);

}  // namespace vecs
