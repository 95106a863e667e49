#include "vecs/model.hpp"

#include <cmath>
#include <string>

#include "vecs/errors.hpp"

namespace vecs {

namespace {
// Guards ceil() against representation noise such as 0.7 * 10 = 7.000000000000001.
constexpr double kCeilSlack = 1e-9;
constexpr double kUtilSlack = 1e-12;
}  // namespace

bool is_valid(const Task& task) {
  return task.arrival >= 0 && task.arrival < task.deadline && task.min_processing >= 1 &&
         task.min_processing <= task.deadline - task.arrival;
}

double min_utilisation(const Task& task, Time start) {
  if (start >= task.deadline) {
    throw InfeasibleStartError("task " + std::to_string(task.id) + ": start " +
                               std::to_string(start) + " is not before deadline " +
                               std::to_string(task.deadline));
  }
  return static_cast<double>(task.min_processing) / static_cast<double>(task.deadline - start);
}

Time stretched_processing(const Task& task, Time start, double utilisation) {
  const double u_min = min_utilisation(task, start);
  if (utilisation < u_min - kUtilSlack) {
    throw UtilisationTooLowError("task " + std::to_string(task.id) + ": utilisation " +
                                 std::to_string(utilisation) + " below minimum " +
                                 std::to_string(u_min));
  }
  if (utilisation > 1.0 + kUtilSlack) {
    throw ContractViolation("utilisation above u_max = 1");
  }
  const double window = static_cast<double>(task.deadline - start);
  auto processing = static_cast<Time>(std::ceil(utilisation * window - kCeilSlack));
  if (processing < task.min_processing) processing = task.min_processing;
  if (start + processing > task.deadline) {
    throw InfeasibleStartError("task " + std::to_string(task.id) + ": stretched processing overruns deadline");
  }
  return processing;
}

double instantaneous_power(double committed, const VecsConfig& cfg) {
  const double ratio = committed / cfg.u_max_bs;
  const double cube = ratio * ratio * ratio;
  if (cfg.energy_model == EnergyModel::kLiteral) {
    return cfg.p_static + ((cfg.p_max - cfg.p_static) + cube);
  }
  return cfg.p_static + (cfg.p_max - cfg.p_static) * cube;
}

double energy_cost(std::span<const std::vector<MicroCores>> calendars, Time horizon,
                   const VecsConfig& cfg) {
  const double idle = instantaneous_power(0.0, cfg);
  double total = 0.0;
  for (Time t = 0; t < horizon; ++t) {
    for (const auto& calendar : calendars) {
      const auto slot = static_cast<std::size_t>(t);
      if (slot < calendar.size() && calendar[slot] != 0) {
        total += instantaneous_power(from_micro(calendar[slot]), cfg);
      } else {
        total += idle;
      }
    }
  }
  return total;
}

double offload_distance(Point av, Point bs) {
  const double dx = static_cast<double>(av.x - bs.x);
  const double dy = static_cast<double>(av.y - bs.y);
  return std::sqrt(dx * dx + dy * dy);
}

double slack(const Task& task) {
  return static_cast<double>(task.deadline - task.arrival) / static_cast<double>(task.min_processing);
}

SlackClass slack_class(const Task& task) {
  const double mu = slack(task);
  if (mu < 1.5) return SlackClass::kTight;
  if (mu <= 3.0) return SlackClass::kNormal;
  return SlackClass::kLoose;
}

const char* to_string(SlackClass c) {
  switch (c) {
    case SlackClass::kTight: return "tight";
    case SlackClass::kNormal: return "normal";
    case SlackClass::kLoose: return "loose";
  }
  return "?";
}

double drop_penalty(const TaskOutcome& outcome, const VecsConfig& cfg) {
  if (outcome.dropped && !outcome.scheduled) {
    throw LedgerCorruptionError("task " + std::to_string(outcome.task) +
                                " marked dropped without having been scheduled");
  }
  const int y = outcome.scheduled ? 1 : 0;
  const int z = outcome.dropped ? 1 : 0;
  const int missed = (1 - y) + z * y;
  const double pen = outcome.flag == Criticality::kHard ? cfg.pen_hard : cfg.pen_soft;
  return static_cast<double>(missed) * (1.0 + cfg.delta_pen) * pen;
}

double drop_penalty(std::span<const TaskOutcome> outcomes, const VecsConfig& cfg) {
  double total = 0.0;
  for (const auto& o : outcomes) total += drop_penalty(o, cfg);
  return total;
}

double drop_all_penalty(std::span<const Task> tasks, const VecsConfig& cfg) {
  double total = 0.0;
  for (const auto& t : tasks) total += (1.0 + cfg.delta_pen) * (t.is_hard() ? cfg.pen_hard : cfg.pen_soft);
  return total;
}

double total_cost(const CostLedger& ledger) {
  return ledger.c_drop + ledger.lambda_dis * ledger.c_dis + ledger.lambda_e * ledger.c_e;
}

void settle(CostLedger& ledger, const VecsConfig& cfg) {
  ledger.c_drop = drop_penalty(ledger.outcomes, cfg);
  double dis = 0.0;
  for (const auto& o : ledger.outcomes) {
    if (o.scheduled) dis += o.distance;
  }
  ledger.c_dis = dis;
  ledger.lambda_e = cfg.lambda_e;
  ledger.lambda_dis = cfg.lambda_dis;
}

}  // namespace vecs
