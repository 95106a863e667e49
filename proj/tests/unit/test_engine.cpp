#include <gtest/gtest.h>

#include <map>

#include "builders.hpp"
#include "vecs/engine.hpp"
#include "vecs/errors.hpp"
#include "vecs/harness.hpp"
#include "vecs/workload.hpp"

using namespace vecs;
using vecs::testing::hard;
using vecs::testing::scenario;
using vecs::testing::task;

namespace {

VecsConfig small_cfg(double cores = 4.0) {
  VecsConfig cfg;
  cfg.u_max_bs = cores;
  cfg.u_threshold = cores / 2;
  cfg.grid_size = 20;
  return cfg;
}

void fill(EngineState& s, BsId bs, Time from, Time to, double cores) {
  for (Time t = from; t < to; ++t) s.stations[static_cast<std::size_t>(bs)].load[static_cast<std::size_t>(t)] = to_micro(cores);
}

std::vector<Event> of_kind(const EventLog& log, EventKind kind) {
  std::vector<Event> out;
  for (const auto& e : log.events()) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

}  // namespace

TEST(Policies, NamesRoundTrip) {
  for (PolicyId p : all_policies()) EXPECT_EQ(parse_policy(to_string(p)), p);
  EXPECT_EQ(all_policies().size(), 4u);
  EXPECT_THROW(parse_policy("edf"), ConfigError);
}

TEST(EngineState, EarliestStartIsNextBoundaryAfterLatency) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 30, 2)}, small_cfg()), PolicyId::kDynamicHolding);
  EXPECT_EQ(s.earliest_start(0), 3);
  EXPECT_EQ(s.earliest_start(1), 3);
  EXPECT_EQ(s.earliest_start(2), 3);
  EXPECT_EQ(s.earliest_start(3), 6);
  EXPECT_EQ(s.horizon, 30);
  EXPECT_EQ(s.log.events().front().kind, EventKind::kBegin);
}

TEST(Run, EmptyTaskSetCostsIdleEnergyOnly) {
  VecsConfig cfg = small_cfg();
  cfg.horizon = 10;
  const RunReport r = run(scenario({{0, 0}}, {}, cfg), PolicyId::kDynamicHolding);
  EXPECT_DOUBLE_EQ(r.ledger.c_drop, 0.0);
  EXPECT_DOUBLE_EQ(r.ledger.c_dis, 0.0);
  EXPECT_NEAR(r.ledger.c_e, 10 * 0.2, 1e-12);
  EXPECT_EQ(r.horizon, 10);
}

TEST(Run, SingleUncontendedTaskCompletes) {
  for (PolicyId p : all_policies()) {
    const RunReport r = run(scenario({{0, 0}}, {task(0, 0, 20, 4)}, small_cfg()), p);
    EXPECT_DOUBLE_EQ(r.ledger.c_drop, 0.0);
    EXPECT_EQ(r.counts.completed_soft, 1);
    EXPECT_EQ(r.counts.local_admissions, 1);
    EXPECT_DOUBLE_EQ(r.ledger.c_dis, 0.0);
  }
}

TEST(LocalAdmit, IdleStationAdmitsAtFullUtilisation) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  const Message tor{MessageKind::kTor, 0, 0, 0, {0, 0}, 0.0, 0};
  EXPECT_DOUBLE_EQ(*bs_local_admit(s, 0, tor), 1.0);
}

TEST(LocalAdmit, StationAtThresholdStaysSilent) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  fill(s, 0, 0, 13, 2.0);
  const Message tor{MessageKind::kTor, 0, 0, 0, {0, 0}, 0.0, 0};
  EXPECT_FALSE(bs_local_admit(s, 0, tor).has_value());
}

TEST(LocalAdmit, OnlyMinimalStretchFits) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  fill(s, 0, 3, 13, 2.0 - 0.42);
  const Message tor{MessageKind::kTor, 0, 0, 0, {0, 0}, 0.0, 0};
  EXPECT_DOUBLE_EQ(*bs_local_admit(s, 0, tor), 0.4);
}

TEST(LocalAdmit, ExplicitGridReplacesStepScan) {
  VecsConfig cfg = small_cfg();
  cfg.local_u_grid = {1.0, 0.6};
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 13, 4)}, cfg), PolicyId::kDynamicHolding);
  fill(s, 0, 3, 13, 2.0 - 0.7);
  const Message tor{MessageKind::kTor, 0, 0, 0, {0, 0}, 0.0, 0};
  EXPECT_DOUBLE_EQ(*bs_local_admit(s, 0, tor), 0.6);
  EXPECT_THROW(bs_local_admit(s, 0, {MessageKind::kTsr, 0, 0, 0, {0, 0}, 0.0, 0}), ContractViolation);
}

TEST(AvOffer, AllStationsAboveThresholdEscalates) {
  EngineState s = make_state(scenario({{1, 0}, {0, 2}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  fill(s, 0, 0, 13, 2.0);
  fill(s, 1, 0, 13, 2.0);
  EXPECT_EQ(av_offer_phase(s, 0), LocalOutcome::kEscalated);
  EXPECT_EQ(s.pending_tsr, std::vector<std::size_t>{0});
  const auto tsr = of_kind(s.log, EventKind::kTsr);
  ASSERT_EQ(tsr.size(), 1u);
  EXPECT_EQ(tsr[0].bs, 0);
  EXPECT_EQ(of_kind(s.log, EventKind::kTor).size(), 2u);
  EXPECT_TRUE(of_kind(s.log, EventKind::kAlloc).empty());
}

TEST(AvOffer, TsrGoesToNearestEvenOutOfRange) {
  VecsConfig cfg = small_cfg();
  cfg.d_hat_max = 2;
  EngineState s = make_state(scenario({{9, 9}, {5, 0}}, {task(0, 0, 13, 4)}, cfg), PolicyId::kDynamicHolding);
  EXPECT_EQ(av_offer_phase(s, 0), LocalOutcome::kEscalated);
  EXPECT_TRUE(of_kind(s.log, EventKind::kTor).empty());
  EXPECT_EQ(of_kind(s.log, EventKind::kTsr).at(0).bs, 1);
}

TEST(AvOffer, OnlyFreeStationSelected) {
  EngineState s = make_state(scenario({{1, 0}, {0, 2}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  fill(s, 0, 0, 13, 2.0);
  EXPECT_EQ(av_offer_phase(s, 0), LocalOutcome::kAdmitted);
  const auto alloc = of_kind(s.log, EventKind::kAlloc);
  ASSERT_EQ(alloc.size(), 1u);
  EXPECT_EQ(alloc[0].bs, 1);
  EXPECT_EQ(detail_value(alloc[0].detail, "mode"), "local");
  EXPECT_TRUE(of_kind(s.log, EventKind::kNack).empty());
}

TEST(AvOffer, EqualDistanceTieGoesToLowerId) {
  EngineState s = make_state(scenario({{3, 0}, {0, 3}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  EXPECT_EQ(av_offer_phase(s, 0), LocalOutcome::kAdmitted);
  EXPECT_EQ(of_kind(s.log, EventKind::kAlloc).at(0).bs, 0);
  EXPECT_EQ(of_kind(s.log, EventKind::kToa).size(), 2u);
  const auto nack = of_kind(s.log, EventKind::kNack);
  ASSERT_EQ(nack.size(), 1u);
  EXPECT_EQ(nack[0].bs, 1);
}

TEST(CsBatch, HardBeforeSoftAtEqualDeadline) {
  VecsConfig cfg = small_cfg(1.0);
  cfg.cc_latency = 1000;
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 16, 5), hard(1, 0, 16, 5)}, cfg), PolicyId::kDynamicHolding);
  s.pending_tsr = {0, 1};
  s.clock = 3;
  cs_batch_schedule(s);
  const auto alloc = of_kind(s.log, EventKind::kAlloc);
  ASSERT_EQ(alloc.size(), 1u);
  EXPECT_EQ(alloc[0].task, 1);
  EXPECT_EQ(s.queue, std::vector<std::size_t>{0});
  const auto tea = of_kind(s.log, EventKind::kTea);
  ASSERT_EQ(tea.size(), 1u);
  EXPECT_EQ(detail_value(tea[0].detail, "start"), "6");
}

TEST(CsBatch, EarliestDeadlineFirst) {
  EngineState s = make_state(scenario({{0, 0}}, {hard(0, 0, 20, 2), hard(1, 0, 18, 2)}, small_cfg()),
                             PolicyId::kDynamicHolding);
  s.pending_tsr = {0, 1};
  s.clock = 3;
  cs_batch_schedule(s);
  const auto alloc = of_kind(s.log, EventKind::kAlloc);
  ASSERT_EQ(alloc.size(), 2u);
  EXPECT_EQ(alloc[0].task, 1);
  EXPECT_EQ(alloc[1].task, 0);
}

TEST(CsBatch, TsrFromCurrentWindowWaitsForNextBatch) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 3, 30, 2)}, small_cfg()), PolicyId::kDynamicHolding);
  s.pending_tsr = {0};
  s.clock = 3;
  cs_batch_schedule(s);
  EXPECT_TRUE(of_kind(s.log, EventKind::kAlloc).empty());
  EXPECT_EQ(s.pending_tsr.size(), 1u);
}

TEST(CsBatch, CloudTakesWhatItCanFinish) {
  VecsConfig cfg = small_cfg(1.0);
  cfg.cc_latency = 6;
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 20, 5), task(1, 0, 20, 5)}, cfg), PolicyId::kSelfishHolding);
  fill(s, 0, 0, 20, 1.0);
  s.pending_tsr = {0, 1};
  s.clock = 3;
  cs_batch_schedule(s);
  const auto cloud = of_kind(s.log, EventKind::kCloud);
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud[0].bs, kCloudBs);
  EXPECT_EQ(detail_value(cloud[0].detail, "finish"), "14");
  EXPECT_EQ(s.outcomes[0].distance, 2.0 * cfg.d_hat_max);
  EXPECT_TRUE(s.queue.empty());
}

TEST(Run, HopelessTaskIsChargedOnce) {
  VecsConfig cfg = small_cfg(1.0);
  cfg.cc_latency = 1000;
  const RunReport r = run(scenario({{0, 0}}, {task(0, 0, 12, 10)}, cfg), PolicyId::kDynamicHolding);
  const auto drops = of_kind(r.log, EventKind::kDrop);
  ASSERT_EQ(drops.size(), 1u);
  EXPECT_EQ(detail_value(drops[0].detail, "reason"), "expired");
  EXPECT_DOUBLE_EQ(r.ledger.c_drop, 1.3);
}

TEST(Run, QueuedSoftTaskRetriesUntilSpaceFrees) {
  // Station saturated by a hard task until slot 12; the soft task fits afterwards.
  VecsConfig cfg = small_cfg(1.0);
  cfg.u_threshold = 1.0;
  cfg.u_hat_max = 1.0;
  cfg.cc_latency = 1000;
  const RunReport r = run(scenario({{0, 0}}, {hard(0, 0, 12, 9), task(1, 0, 40, 5)}, cfg), PolicyId::kSelfishHolding);
  EXPECT_EQ(r.counts.completed_hard, 1);
  EXPECT_EQ(r.counts.completed_soft, 1);
  EXPECT_GE(of_kind(r.log, EventKind::kAlloc).at(1).time, 9);
}

TEST(TrySchedule, EmptyCalendarReportsDistance) {
  Scenario sc = scenario({{3, 4}}, {task(0, 0, 13, 4)}, small_cfg());
  EngineState s = make_state(sc, PolicyId::kDynamicHolding);
  const auto r = try_schedule(s, 0, s.tasks[0], 0.5, 0, {s.capacity_micro(), std::nullopt});
  ASSERT_TRUE(r.feasible);
  EXPECT_DOUBLE_EQ(*r.distance, 5.0);
  EXPECT_EQ(r.start, 3);
  EXPECT_EQ(r.finish, 8);
}

TEST(TrySchedule, DeadlineOverrunHasNoCosts) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  const auto r = try_schedule(s, 0, s.tasks[0], 0.5, 9, {s.capacity_micro(), std::nullopt});
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.delta_energy.has_value());
  EXPECT_FALSE(r.distance.has_value());
}

TEST(TrySchedule, RadiusAndCapRespected) {
  EngineState s = make_state(scenario({{3, 4}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  EXPECT_FALSE(try_schedule(s, 0, s.tasks[0], 0.5, 0, {s.capacity_micro(), 4.9}).feasible);
  EXPECT_TRUE(try_schedule(s, 0, s.tasks[0], 0.5, 0, {s.capacity_micro(), 5.0}).feasible);
  EXPECT_FALSE(try_schedule(s, 0, s.tasks[0], 0.5, 0, {to_micro(0.4), std::nullopt}).feasible);
  EXPECT_FALSE(try_schedule(s, 0, s.tasks[0], 0.3, 0, {s.capacity_micro(), std::nullopt}).feasible);
}

TEST(TrySchedule, MarginalEnergyIsCubicDelta) {
  VecsConfig cfg = small_cfg(2.0);
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 11, 4)}, cfg), PolicyId::kDynamicHolding);
  fill(s, 0, 0, 11, 1.0);
  const auto r = try_schedule(s, 0, s.tasks[0], 0.5, 0, {s.capacity_micro(), std::nullopt});
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.finish - r.start, 4);
  const double want = 4 * 1999.8 * (0.421875 - 0.125);
  EXPECT_NEAR(*r.delta_energy, want, want * 1e-9);
}

TEST(Schedule, ReservesAndRecordsOutcome) {
  EngineState s = make_state(scenario({{3, 4}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  const Allocation& a = schedule(s, 0, s.tasks[0], 0.5, 0, true);
  EXPECT_EQ(a.start, 3);
  EXPECT_EQ(a.finish, 8);
  EXPECT_EQ(s.stations[0].load_at(3), to_micro(0.5));
  EXPECT_EQ(s.stations[0].load_at(8), 0);
  EXPECT_TRUE(s.outcomes[0].scheduled);
  EXPECT_DOUBLE_EQ(s.outcomes[0].distance, 5.0);
  EXPECT_EQ(s.counts.global_admissions, 1);
  EXPECT_THROW(schedule(s, 0, s.tasks[0], 0.5, 0, true), InternalFault);
}

TEST(Schedule, CapacityRaceIsInternalFault) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 13, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  fill(s, 0, 0, 13, 3.8);
  EXPECT_THROW(schedule(s, 0, s.tasks[0], 0.5, 0, true), InternalFault);
}

TEST(Evict, ReleasesRemainderAndRefusesHard) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 20, 4), hard(1, 0, 20, 4)}, small_cfg()),
                             PolicyId::kDynamicHolding);
  schedule(s, 0, s.tasks[0], 0.5, 0, true);
  schedule(s, 0, s.tasks[1], 0.5, 0, true);
  evict(s, 0, 6, 1);
  EXPECT_EQ(s.stations[0].load_at(5), to_micro(1.0));
  EXPECT_EQ(s.stations[0].load_at(6), to_micro(0.5));
  EXPECT_TRUE(s.outcomes[0].dropped);
  EXPECT_EQ(s.allocations[0].released_at, 6);
  EXPECT_THROW(evict(s, 1, 6, 0), ContractViolation);
  EXPECT_THROW(evict(s, 0, 6, 1), ContractViolation);
}

TEST(Execute, TransitionsAndCompletes) {
  EngineState s = make_state(scenario({{0, 0}}, {task(0, 0, 20, 4)}, small_cfg()), PolicyId::kDynamicHolding);
  schedule(s, 0, s.tasks[0], 1.0, 0, false);
  s.clock = 3;
  execute_and_complete(s);
  EXPECT_EQ(s.allocations[0].state, AllocationState::kExecuting);
  s.clock = 21;
  execute_and_complete(s);
  EXPECT_EQ(s.allocations[0].state, AllocationState::kCompleted);
  EXPECT_EQ(s.counts.completed_soft, 1);
  EXPECT_TRUE(s.stations[0].active.empty());
}

TEST(Run, EveryTaskResolvedExactlyOnce) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GeneratorParams gp = figure_base_params();
    gp.n_tasks = 300;
    gp.n_bs = 10;
    gp.seed = seed;
    gp.cfg.cc_latency = 6;
    const Scenario sc = generate_synthetic(gp);
    for (PolicyId p : all_policies()) {
      const RunReport r = run(sc, p);
      std::map<TaskId, int> terminal;
      for (const auto& e : r.log.events()) {
        if (e.kind == EventKind::kComplete || e.kind == EventKind::kDrop || e.kind == EventKind::kCloud ||
            e.kind == EventKind::kEvict) {
          ++terminal[e.task];
        }
      }
      ASSERT_EQ(terminal.size(), sc.tasks.size());
      for (const auto& [id, n] : terminal) ASSERT_EQ(n, 1) << "task " << id;
      const auto& c = r.counts;
      EXPECT_EQ(c.completed_hard + c.completed_soft + c.dropped_hard + c.dropped_soft + c.cloud_hard + c.cloud_soft,
                static_cast<std::int64_t>(sc.tasks.size()));
    }
  }
}

TEST(Run, DeterministicLogs) {
  GeneratorParams gp = figure_base_params();
  gp.n_tasks = 200;
  gp.n_bs = 10;
  const Scenario sc = generate_synthetic(gp);
  for (PolicyId p : all_policies()) EXPECT_EQ(run(sc, p).log.to_string(), run(sc, p).log.to_string());
}

TEST(Run, ReportListsDecisions) {
  const RunReport r = run(scenario({{0, 0}}, {task(0, 0, 20, 4)}, small_cfg()), PolicyId::kBaruahBaseline);
  std::ostringstream out;
  write_report(out, r);
  EXPECT_NE(out.str().find("baseline ignores u_hat_max"), std::string::npos);
  EXPECT_NE(out.str().find("c_total="), std::string::npos);
}
