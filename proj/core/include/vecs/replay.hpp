#pragma once

#include <string>
#include <vector>

#include "vecs/engine.hpp"
#include "vecs/scenario.hpp"

namespace vecs {

struct ReplayResult {
  CostLedger ledger;
  double c_total = 0.0;
  Time horizon = 0;
  /// Rebuilt per-station calendars.
  std::vector<std::vector<MicroCores>> calendars;
};

/// Rebuilds costs from an event log alone (plus the scenario's tasks and
/// config): allocations, evictions, cloud offloads and drops.
ReplayResult replay(const Scenario& scenario, const EventLog& log);

struct AuditReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Replays the log in order and checks capacity safety: U_j(t) <= U^max at
/// all times, U^T at local admission, u_hat_max * U^max at global placement
/// (unless `global_cap_applies` is false), f <= d for completions, no hard
/// evictions, at most one station per task and TOA/TEA exclusivity.
AuditReport audit(const Scenario& scenario, const EventLog& log, bool global_cap_applies);

}  // namespace vecs
