#include "vecs/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vecs/errors.hpp"

namespace vecs {

namespace {

constexpr double kUtilSlack = 1e-12;
constexpr std::int64_t kSearchBudget = 200000;

MicroCores hat_limit(const EngineState& state) {
  return to_micro(state.cfg.u_hat_max * state.cfg.u_max_bs);
}

PolicyOutcome place(EngineState& state, const Task& task, const Placement& p) {
  schedule(state, p.bs, task, p.utilisation, state.clock, true);
  return PolicyOutcome::kScheduled;
}

PolicyOutcome hard_fallback(EngineState& state, std::size_t index, MicroCores limit) {
  if (!state.tasks[index].is_hard()) return PolicyOutcome::kNotPlaced;
  return drop_for_hard(state, index, limit) ? PolicyOutcome::kScheduledWithEviction : PolicyOutcome::kNotPlaced;
}

struct Candidate {
  std::size_t allocation;
  TaskId task;
  MicroCores micro;
  Time from;
  Time to;
};

// Exact minimum-cardinality cover of the per-slot excess `need` over [s, f).
class CoverSearch {
 public:
  CoverSearch(std::vector<Candidate> cands, std::vector<MicroCores> need, Time start)
      : cands_(std::move(cands)), need_(std::move(need)), start_(start) {}

  // Smallest set in lexicographic task-id order; nullopt when the budget runs out.
  std::optional<std::vector<std::size_t>> solve() {
    for (std::size_t k = 1; k <= cands_.size(); ++k) {
      chosen_.clear();
      if (dfs(0, k)) return chosen_;
      if (nodes_ > kSearchBudget) return std::nullopt;
    }
    return std::vector<std::size_t>{};
  }

  // Largest-first until every slot is covered.
  std::vector<std::size_t> greedy() {
    std::vector<std::size_t> order(cands_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cands_[a].micro > cands_[b].micro; });
    std::vector<std::size_t> picked;
    for (std::size_t i : order) {
      if (covered()) break;
      if (!relieves(i)) continue;
      apply(i, -1);
      picked.push_back(i);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  const Candidate& candidate(std::size_t i) const { return cands_[i]; }

 private:
  bool covered() const {
    return std::all_of(need_.begin(), need_.end(), [](MicroCores v) { return v <= 0; });
  }

  bool relieves(std::size_t i) const {
    const Candidate& c = cands_[i];
    for (Time t = c.from; t < c.to; ++t) {
      if (need_[static_cast<std::size_t>(t - start_)] > 0) return true;
    }
    return false;
  }

  void apply(std::size_t i, int sign) {
    const Candidate& c = cands_[i];
    for (Time t = c.from; t < c.to; ++t) need_[static_cast<std::size_t>(t - start_)] += sign * c.micro;
  }

  bool dfs(std::size_t next, std::size_t k) {
    if (++nodes_ > kSearchBudget) return false;
    if (covered()) return true;
    if (chosen_.size() == k) return false;
    const std::size_t left = k - chosen_.size();
    if (cands_.size() - next < left) return false;

    // Bound: the worst slot must be coverable by the `left` largest remaining.
    std::size_t worst = 0;
    for (std::size_t t = 1; t < need_.size(); ++t) {
      if (need_[t] > need_[worst]) worst = t;
    }
    const Time slot = start_ + static_cast<Time>(worst);
    std::vector<MicroCores> sizes;
    for (std::size_t i = next; i < cands_.size(); ++i) {
      if (cands_[i].from <= slot && slot < cands_[i].to) sizes.push_back(cands_[i].micro);
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    MicroCores best = 0;
    for (std::size_t i = 0; i < sizes.size() && i < left; ++i) best += sizes[i];
    if (best < need_[worst]) return false;

    for (std::size_t i = next; i < cands_.size(); ++i) {
      if (!relieves(i)) continue;
      apply(i, -1);
      chosen_.push_back(i);
      if (dfs(i + 1, k)) return true;
      chosen_.pop_back();
      apply(i, +1);
      if (nodes_ > kSearchBudget) return false;
    }
    return false;
  }

  std::vector<Candidate> cands_;
  std::vector<MicroCores> need_;
  Time start_;
  std::vector<std::size_t> chosen_;
  std::int64_t nodes_ = 0;
};

}  // namespace

BsId nearest_station(const EngineState& state, Point p) {
  BsId best = kNoBs;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& st : state.stations) {
    const double d = offload_distance(p, st.loc);
    if (d < best_d) {
      best_d = d;
      best = st.id;
    }
  }
  if (best == kNoBs) throw ContractViolation("no stations");
  return best;
}

MicroCores global_limit(const EngineState& state, PolicyId policy) {
  return policy == PolicyId::kBaruahBaseline ? state.capacity_micro() : hat_limit(state);
}

std::optional<Placement> select_bs_and_utility(const EngineState& state, const PlacementQuery& q) {
  if (q.task == nullptr) throw ContractViolation("placement query without task");
  const ScheduleCaps caps{hat_limit(state), state.cfg.d_hat_max};
  std::optional<Placement> best;
  for (const auto& st : state.stations) {
    if (offload_distance(q.av_loc, st.loc) > state.cfg.d_hat_max + 1e-9) continue;
    const TryScheduleResult r = try_schedule(state, st.id, *q.task, q.utilisation, q.batch, caps);
    if (!r.feasible) continue;
    Placement p{st.id, q.utilisation, *r.delta_energy, *r.distance,
                state.cfg.lambda_e * *r.delta_energy + state.cfg.lambda_dis * *r.distance};
    const bool better = !best || p.weighted_cost < best->weighted_cost ||
                        (p.weighted_cost == best->weighted_cost &&
                         (p.distance < best->distance || (p.distance == best->distance && p.bs < best->bs)));
    if (better) best = p;
  }
  return best;
}

std::optional<EvictionPlan> find_eviction(const EngineState& state, const Task& task, Time decided_at,
                                          MicroCores limit) {
  const Time s = state.earliest_start(decided_at);
  if (s + task.min_processing > task.deadline) return std::nullopt;
  const double u = min_utilisation(task, s);
  const MicroCores add = to_micro(u);
  const Time f = s + stretched_processing(task, s, u);
  const double unit = (1.0 + state.cfg.delta_pen) * state.cfg.pen_soft;

  std::optional<EvictionPlan> best;
  for (const auto& st : state.stations) {
    if (static_cast<std::size_t>(f) > st.load.size()) continue;
    std::vector<MicroCores> need(static_cast<std::size_t>(f - s));
    bool any = false;
    for (Time t = s; t < f; ++t) {
      need[static_cast<std::size_t>(t - s)] = st.load[static_cast<std::size_t>(t)] + add - limit;
      any = any || need[static_cast<std::size_t>(t - s)] > 0;
    }
    if (add > limit) continue;

    std::vector<Candidate> cands;
    for (std::size_t idx : st.active) {
      const Allocation& a = state.allocations[idx];
      if (state.tasks[state.index(a.task)].is_hard()) continue;
      if (a.state != AllocationState::kReserved && a.state != AllocationState::kExecuting) continue;
      const Time from = std::max(a.start, s);
      const Time to = std::min(a.finish, f);
      if (from < to) cands.push_back({idx, a.task, a.micro, from, to});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.task < y.task; });

    std::vector<std::size_t> picked;
    if (any) {
      // Quick reject when evicting everything is still not enough.
      std::vector<MicroCores> freed(need.size(), 0);
      for (const auto& c : cands) {
        for (Time t = c.from; t < c.to; ++t) freed[static_cast<std::size_t>(t - s)] += c.micro;
      }
      bool possible = true;
      for (std::size_t t = 0; t < need.size(); ++t) possible = possible && freed[t] >= need[t];
      if (!possible) continue;
      CoverSearch search(cands, need, s);
      auto exact = search.solve();
      picked = exact ? *exact : CoverSearch(cands, need, s).greedy();
    }

    EvictionPlan plan;
    plan.bs = st.id;
    for (std::size_t i : picked) plan.victims.push_back(cands[i].allocation);
    plan.penalty = unit * static_cast<double>(picked.size());
    const bool better = !best || plan.victims.size() < best->victims.size() ||
                        (plan.victims.size() == best->victims.size() &&
                         (plan.penalty < best->penalty ||
                          (plan.penalty == best->penalty && plan.bs < best->bs)));
    if (better) best = std::move(plan);
  }
  return best;
}

std::optional<BsId> drop_for_hard(EngineState& state, std::size_t task_index, MicroCores limit) {
  const Task task = state.tasks[task_index];
  if (!task.is_hard()) throw ContractViolation("eviction requested for soft task " + std::to_string(task.id));
  auto plan = find_eviction(state, task, state.clock, limit);
  if (!plan) return std::nullopt;
  for (std::size_t v : plan->victims) evict(state, v, state.clock, task.id);
  const Time s = state.earliest_start(state.clock);
  const double u = min_utilisation(task, s);
  const TryScheduleResult r = try_schedule(state, plan->bs, task, u, state.clock, {limit, std::nullopt});
  if (!r.feasible) throw InternalFault("eviction plan did not free enough capacity for task " + std::to_string(task.id));
  schedule(state, plan->bs, task, u, state.clock, true);
  return plan->bs;
}

PolicyOutcome policy_selfish(EngineState& state, std::size_t index) {
  const Task& task = state.tasks[index];
  if (auto p = select_bs_and_utility(state, {&task, 1.0, state.clock, state.request_loc[index]})) {
    return place(state, task, *p);
  }
  return hard_fallback(state, index, global_limit(state, PolicyId::kSelfishHolding));
}

PolicyOutcome policy_nearest(EngineState& state, std::size_t index) {
  const Task& task = state.tasks[index];
  const BsId bs = nearest_station(state, state.request_loc[index]);
  const Time s = state.earliest_start(state.clock);
  const MicroCores limit = global_limit(state, PolicyId::kNearest);
  if (s + task.min_processing <= task.deadline) {
    const double u = min_utilisation(task, s);
    if (try_schedule(state, bs, task, u, state.clock, {limit, std::nullopt}).feasible) {
      schedule(state, bs, task, u, state.clock, true);
      return PolicyOutcome::kScheduled;
    }
  }
  return hard_fallback(state, index, limit);
}

PolicyOutcome policy_dynamic(EngineState& state, std::size_t index) {
  const Task& task = state.tasks[index];
  const Time s = state.earliest_start(state.clock);
  if (s + task.min_processing <= task.deadline) {
    const double u_min = min_utilisation(task, s);
    for (double u : state.cfg.u_fav) {
      if (u < u_min - kUtilSlack) continue;
      if (auto p = select_bs_and_utility(state, {&task, u, state.clock, state.request_loc[index]})) {
        return place(state, task, *p);
      }
    }
    if (auto p = select_bs_and_utility(state, {&task, u_min, state.clock, state.request_loc[index]})) {
      return place(state, task, *p);
    }
  }
  return hard_fallback(state, index, global_limit(state, PolicyId::kDynamicHolding));
}

PolicyOutcome policy_baruah(EngineState& state, std::size_t index) {
  const Task& task = state.tasks[index];
  const Time s = state.earliest_start(state.clock);
  const MicroCores limit = state.capacity_micro();
  BsId best = kNoBs;
  MicroCores best_load = 0;
  for (const auto& st : state.stations) {
    if (!try_schedule(state, st.id, task, 1.0, state.clock, {limit, std::nullopt}).feasible) continue;
    const MicroCores load = st.load_at(s);
    if (best == kNoBs || load < best_load) {
      best = st.id;
      best_load = load;
    }
  }
  if (best != kNoBs) {
    schedule(state, best, task, 1.0, state.clock, true);
    return PolicyOutcome::kScheduled;
  }
  return hard_fallback(state, index, limit);
}

PolicyOutcome apply_policy(PolicyId policy, EngineState& state, std::size_t index) {
  switch (policy) {
    case PolicyId::kSelfishHolding: return policy_selfish(state, index);
    case PolicyId::kNearest: return policy_nearest(state, index);
    case PolicyId::kDynamicHolding: return policy_dynamic(state, index);
    case PolicyId::kBaruahBaseline: return policy_baruah(state, index);
  }
  throw InternalFault("unknown policy");
}

}  // namespace vecs
