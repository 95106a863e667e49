#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "builders.hpp"
#include "oracles.hpp"
#include "vecs/errors.hpp"
#include "vecs/model.hpp"
#include "vecs/rng.hpp"

using namespace vecs;
using vecs::testing::task;

namespace {

TaskOutcome outcome(Criticality c, bool y, bool z, double dist = 0.0) {
  return TaskOutcome{0, c, y ? BsId{0} : kNoBs, y, z, dist};
}

}  // namespace

TEST(MinUtilisation, Examples) {
  EXPECT_DOUBLE_EQ(min_utilisation(task(0, 0, 10, 4), 0), 0.4);
  EXPECT_DOUBLE_EQ(min_utilisation(task(0, 0, 10, 10), 0), 1.0);
  EXPECT_DOUBLE_EQ(min_utilisation(task(0, 0, 10, 7), 5), 1.4);
}

TEST(MinUtilisation, StartAtDeadlineThrows) {
  EXPECT_THROW(min_utilisation(task(0, 0, 10, 4), 10), InfeasibleStartError);
  EXPECT_THROW(min_utilisation(task(0, 0, 10, 4), 12), InfeasibleStartError);
}

TEST(StretchedProcessing, Examples) {
  const Task t = task(0, 0, 10, 4);
  EXPECT_EQ(stretched_processing(t, 0, 0.7), 7);
  EXPECT_EQ(stretched_processing(t, 0, 1.0), 10);
  EXPECT_EQ(stretched_processing(t, 0, 0.65), 7);
  EXPECT_EQ(stretched_processing(t, 0, 0.4), 4);
}

TEST(StretchedProcessing, BelowMinimumThrows) {
  EXPECT_THROW(stretched_processing(task(0, 0, 10, 4), 0, 0.3), UtilisationTooLowError);
}

TEST(StretchedProcessing, ExactProductsDoNotRoundUp) {
  // 0.6 * 20, 0.7 * 30, 0.8 * 15 carry binary noise above the integer.
  EXPECT_EQ(stretched_processing(task(0, 0, 20, 5), 0, 0.6), 12);
  EXPECT_EQ(stretched_processing(task(0, 0, 30, 5), 0, 0.7), 21);
  EXPECT_EQ(stretched_processing(task(0, 0, 15, 5), 0, 0.8), 12);
}

TEST(StretchedProcessing, NeverOverrunsAndNeverBelowP) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Time p = rng.uniform_int(1, 30);
    const Time d = p + rng.uniform_int(0, 60);
    const Task t = task(0, 0, d, p);
    const double u_min = min_utilisation(t, 0);
    const double u = u_min + (1.0 - u_min) * rng.uniform01();
    const Time q = stretched_processing(t, 0, u);
    EXPECT_GE(q, p);
    EXPECT_LE(q, d);
  }
}

TEST(InstantaneousPower, Examples) {
  VecsConfig cfg;
  EXPECT_DOUBLE_EQ(instantaneous_power(0.0, cfg), 0.2);
  EXPECT_DOUBLE_EQ(instantaneous_power(cfg.u_max_bs, cfg), 2000.0);
  EXPECT_NEAR(instantaneous_power(0.5 * cfg.u_max_bs, cfg), 250.175, 250.175 * 1e-9);
}

TEST(InstantaneousPower, LiteralFormIsOffsetByFullDynamicRange) {
  VecsConfig cfg;
  cfg.energy_model = EnergyModel::kLiteral;
  EXPECT_NEAR(instantaneous_power(0.0, cfg), 2000.0, 1e-9);
  EXPECT_NEAR(instantaneous_power(0.5 * cfg.u_max_bs, cfg), 2000.125, 1e-9);
}

TEST(EnergyCost, Examples) {
  VecsConfig cfg;
  std::vector<std::vector<MicroCores>> idle(1, std::vector<MicroCores>(10, 0));
  EXPECT_NEAR(energy_cost(idle, 10, cfg), 2.0, 1e-12);
  std::vector<std::vector<MicroCores>> two = {{0}, {to_micro(cfg.u_max_bs)}};
  EXPECT_NEAR(energy_cost(two, 1, cfg), 2000.2, 1e-9);
}

TEST(EnergyCost, SlotsPastCalendarCountIdle) {
  VecsConfig cfg;
  std::vector<std::vector<MicroCores>> short_cal(1, std::vector<MicroCores>(2, 0));
  EXPECT_NEAR(energy_cost(short_cal, 5, cfg), 1.0, 1e-12);
}

TEST(EnergyCost, MatchesLonghandOnRandomCalendars) {
  VecsConfig cfg;
  cfg.u_max_bs = 4.0;
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::vector<MicroCores>> cals(static_cast<std::size_t>(rng.uniform_int(1, 5)));
    for (auto& c : cals) {
      c.resize(static_cast<std::size_t>(rng.uniform_int(1, 40)));
      for (auto& v : c) v = rng.uniform_int(0, 4'000'000);
    }
    const Time h = rng.uniform_int(1, 50);
    const double want = vecs::testing::oracle_energy(cals, h, cfg);
    EXPECT_NEAR(energy_cost(cals, h, cfg), want, std::abs(want) * 1e-12);
  }
}

TEST(OffloadDistance, Examples) {
  EXPECT_DOUBLE_EQ(offload_distance({0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(offload_distance({7, 7}, {7, 7}), 0.0);
  EXPECT_DOUBLE_EQ(offload_distance({1, 1}, {4, 5}), 5.0);
}

TEST(DropPenalty, Examples) {
  VecsConfig cfg;
  EXPECT_DOUBLE_EQ(drop_penalty(outcome(Criticality::kSoft, true, false), cfg), 0.0);
  EXPECT_DOUBLE_EQ(drop_penalty(outcome(Criticality::kHard, true, false), cfg), 0.0);
  EXPECT_DOUBLE_EQ(drop_penalty(outcome(Criticality::kSoft, false, false), cfg), 1.3);
  EXPECT_DOUBLE_EQ(drop_penalty(outcome(Criticality::kHard, false, false), cfg), 130.0);
  EXPECT_DOUBLE_EQ(drop_penalty(outcome(Criticality::kSoft, true, true), cfg), 1.3);
}

TEST(DropPenalty, DroppedWithoutScheduleIsCorrupt) {
  VecsConfig cfg;
  EXPECT_THROW(drop_penalty(outcome(Criticality::kSoft, false, true), cfg), LedgerCorruptionError);
}

TEST(DropPenalty, DropAllNormaliser) {
  VecsConfig cfg;
  std::vector<Task> ts = {vecs::testing::hard(0, 0, 5, 1), task(1, 0, 5, 1), task(2, 0, 5, 1)};
  EXPECT_DOUBLE_EQ(drop_all_penalty(ts, cfg), 130.0 + 2.6);
}

TEST(TotalCost, Examples) {
  CostLedger zero;
  EXPECT_DOUBLE_EQ(total_cost(zero), 0.0);
  CostLedger l;
  l.c_drop = 130;
  l.c_dis = 5;
  l.c_e = 2;
  l.lambda_dis = 1;
  l.lambda_e = 1;
  EXPECT_DOUBLE_EQ(total_cost(l), 137.0);
}

TEST(Settle, CountsDistanceOfEveryScheduledTask) {
  VecsConfig cfg;
  CostLedger l;
  l.outcomes = {outcome(Criticality::kSoft, true, false, 3.0), outcome(Criticality::kSoft, true, true, 4.0),
                outcome(Criticality::kHard, false, false, 0.0)};
  settle(l, cfg);
  EXPECT_DOUBLE_EQ(l.c_dis, 7.0);
  EXPECT_DOUBLE_EQ(l.c_drop, 131.3);
  EXPECT_DOUBLE_EQ(l.lambda_e, cfg.lambda_e);
}

TEST(SlackClass, Examples) {
  EXPECT_EQ(slack_class(task(0, 0, 10, 8)), SlackClass::kTight);
  EXPECT_EQ(slack_class(task(0, 0, 10, 5)), SlackClass::kNormal);
  EXPECT_EQ(slack_class(task(0, 0, 40, 10)), SlackClass::kLoose);
  EXPECT_EQ(slack_class(task(0, 0, 15, 10)), SlackClass::kNormal);
  EXPECT_EQ(slack_class(task(0, 0, 30, 10)), SlackClass::kNormal);
  EXPECT_STREQ(to_string(SlackClass::kLoose), "loose");
}

TEST(TaskValidity, Invariants) {
  EXPECT_TRUE(is_valid(task(0, 0, 10, 10)));
  EXPECT_FALSE(is_valid(task(0, 5, 5, 1)));
  EXPECT_FALSE(is_valid(task(0, 0, 10, 0)));
  EXPECT_FALSE(is_valid(task(0, 0, 10, 11)));
}

TEST(ReferenceWeights, MatchNormalisation) {
  const double drop_all = 250 * 130.0 + 250 * 1.3;
  EXPECT_NEAR(reference_lambda_energy(), 0.1 * drop_all / (50 * 2000 * 0.2), 1e-12);
  const double mean_dist = (2.0 + std::sqrt(2.0) + 5.0 * std::log(1.0 + std::sqrt(2.0))) / 15.0;
  EXPECT_NEAR(reference_lambda_distance(), 0.1 * drop_all / (500 * 100 * mean_dist), 1e-12);
}
