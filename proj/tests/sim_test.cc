// Copyright 2026 The Gridshade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <vector>

#include <gtest/gtest.h>

#include "gridshade/errors.h"
#include "gridshade/oracle.h"
#include "gridshade/scenario.h"
#include "gridshade/sim.h"
#include "gridshade/topology.h"
#include "test_util.h"

namespace gridshade {
namespace {

using testing::DataPath;
using testing::MakeTopology;

std::size_t At(int var) { return static_cast<std::size_t>(var); }

// Triangle with a regenerated direct link 0-2; node 1 has a battery and
// sits on the cheap optical detour.
Topology Triangle(double battery_kwh) {
  Topology t = MakeTopology(3, {{0, 1, 100.0}, {1, 2, 100.0}, {0, 2, 100.0, 2}}, 2);
  t.nodes[1].equipment.battery_kwh = battery_kwh;
  return t;
}

Scenario DayScenario(const Weights& w, TrafficMatrix demands, bool blackout = true) {
  Scenario s;
  s.name = "triangle";
  s.weights = w;
  if (blackout) s.blackouts = {{1, 0.0, 24.0}};
  s.solver = SolverMode::kExact;
  s.busy_hour_demands = std::move(demands);
  return s;
}

TrafficMatrix Demand02() {
  TrafficMatrix d;
  d.set(0, 2, 30.0);
  return d;
}

std::vector<double> ResidualBefore(const DayResult& day, int slot) {
  return slot == 0 ? day.initial_residual_kwh
                   : day.slots[At(slot - 1)].metrics.battery_residual_kwh;
}

TEST(ApplyBlackout, Examples) {
  Scenario s;
  s.blackouts = {{14, 0.0, 24.0}};
  for (int slot = 0; slot < 12; ++slot) {
    const auto mask = ApplyBlackout(s, 21, slot);
    for (int i = 0; i < 21; ++i) EXPECT_EQ(mask[At(i)], i != 14);
  }
  s.blackouts.clear();
  for (bool up : ApplyBlackout(s, 5, 3)) EXPECT_TRUE(up);
  s.blackouts = {{7, 12.0, 24.0}};
  EXPECT_TRUE(ApplyBlackout(s, 10, 5)[7]);
  EXPECT_FALSE(ApplyBlackout(s, 10, 6)[7]);
}

TEST(ComputeMetrics, HopAccounting) {
  const Topology t = MakeTopology(3, {{0, 1}, {1, 2}, {0, 2}});
  TrafficMatrix d;
  d.set(0, 2, 40.0);
  const auto caps = testing::AllGrid(3);
  const MilpInstance inst = BuildInstance(t, d, caps, BlockingMinWeights());
  std::vector<double> x(At(inst.num_variables()), 0.0);
  x[At(inst.flow(0, 0, 2))] = 40.0;
  x[At(inst.lightpath(0, 2))] = 1.0;
  SlotMetrics m = ComputeMetrics(inst, x);
  EXPECT_EQ(m.virtual_hops_weighted, 1.0);
  EXPECT_EQ(m.lightpath_count, 1);
  EXPECT_EQ(m.blocked_count, 0);

  x[At(inst.flow(0, 0, 2))] = 20.0;
  x[At(inst.flow(0, 0, 1))] = 20.0;
  x[At(inst.flow(0, 1, 2))] = 20.0;
  EXPECT_DOUBLE_EQ(ComputeMetrics(inst, x).virtual_hops_weighted, 1.5);

  std::vector<double> blocked(At(inst.num_variables()), 0.0);
  blocked[At(inst.blocking(0))] = 1.0;
  m = ComputeMetrics(inst, blocked);
  EXPECT_EQ(m.blocking_prob_volume, 1.0);
  EXPECT_EQ(m.blocking_prob_count, 1.0);
  EXPECT_EQ(m.virtual_hops_weighted, 0.0);
}

TEST(RunDay, ZeroTrafficKeepsBatteries) {
  Topology t = Triangle(50.0);
  Scenario s = DayScenario(BlockingMinWeights(), TrafficMatrix{}, false);
  const DayResult day = RunDay(t, s);
  ASSERT_EQ(day.slots.size(), 12u);
  for (const SlotResult& r : day.slots) {
    EXPECT_EQ(r.metrics.blocked_count, 0);
    EXPECT_EQ(r.metrics.blocking_prob_volume, 0.0);
  }
  EXPECT_EQ(day.final_residual_kwh, day.initial_residual_kwh);
}

TEST(RunDay, WesoKeepsTransitOffBlackoutNode) {
  const Topology t = Triangle(10.0);
  const Scenario s = DayScenario(Weso1Weights(), Demand02());
  const DayResult day = RunDay(t, s);
  for (const SlotResult& r : day.slots) {
    EXPECT_EQ(r.transit_gbps[1], 0.0) << "slot " << r.slot;
    EXPECT_EQ(r.metrics.blocked_count, 0);
  }
  EXPECT_GT(day.final_residual_kwh[1], 0.0);
}

TEST(RunDay, ExactSlotsMatchOracle) {
  const Topology t = Triangle(10.0);
  for (const Weights& w : {Weso1Weights(), BlockingMinWeights()}) {
    const Scenario s = DayScenario(w, Demand02());
    const DayResult day = RunDay(t, s);
    SimOptions oracle;
    oracle.exact_solver = [](const MilpInstance& inst) { return EnumerateOracle(inst); };
    for (int slot = 0; slot < 12; ++slot) {
      const std::vector<double> residual = ResidualBefore(day, slot);
      const SlotResult o = SolveSlot(t, s, slot, residual, oracle);
      EXPECT_NEAR(day.slots[At(slot)].solution.objective, o.solution.objective, 1e-6)
          << "slot " << slot;
    }
  }
}

TEST(RunDay, SmallBatteryEventuallyBlocksUnderBlockingMin) {
  const Topology t = Triangle(4.0);
  TrafficMatrix d = Demand02();
  d.set(1, 0, 10.0);
  const DayResult day = RunDay(t, DayScenario(BlockingMinWeights(), d));
  int blocked = 0;
  for (const SlotResult& r : day.slots) blocked += r.metrics.blocked_count;
  EXPECT_GT(blocked, 0);
  EXPECT_FALSE(day.slots.back().powered[1]);
}

TEST(RunDay, BatteryTelescopes) {
  const Topology t = Triangle(10.0);
  TrafficMatrix d = Demand02();
  d.set(1, 2, 12.0);
  for (const Weights& w : {BlockingMinWeights(), Weso3Weights()}) {
    const DayResult day = RunDay(t, DayScenario(w, d));
    for (int i = 0; i < 3; ++i) {
      double previous = day.initial_residual_kwh[At(i)];
      double withdrawn = 0.0;
      for (const SlotResult& r : day.slots) {
        const double now = r.metrics.battery_residual_kwh[At(i)];
        EXPECT_LE(now, previous);
        EXPECT_GE(now, 0.0);
        withdrawn += r.metrics.bt_kw[At(i)] * day.slot_hours;
        previous = now;
      }
      EXPECT_NEAR(day.initial_residual_kwh[At(i)] - day.final_residual_kwh[At(i)],
                  withdrawn, 1e-9);
    }
  }
}

TEST(SolveSlot, ReplayIsBitIdentical) {
  const Topology t = Triangle(10.0);
  TrafficMatrix d = Demand02();
  d.set(2, 1, 7.5);
  const Scenario s = DayScenario(Weso2Weights(), d);
  const DayResult day = RunDay(t, s);
  for (int slot : {0, 5, 11}) {
    const SlotResult again = SolveSlot(t, s, slot, ResidualBefore(day, slot));
    EXPECT_EQ(again.solution.values, day.slots[At(slot)].solution.values);
  }
}

TEST(RunDay, AllGridServesEverythingWithinCapacity) {
  const Topology t = MakeTopology(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 2);
  TrafficMatrix d;
  d.set(0, 2, 35.0);
  d.set(2, 0, 20.0);
  d.set(1, 3, 15.0);
  d.set(3, 1, 40.0);
  const DayResult day = RunDay(t, DayScenario(BlockingMinWeights(), d, false));
  for (const SlotResult& r : day.slots) EXPECT_EQ(r.metrics.blocked_count, 0);
}

TEST(RunDay, ExactModeRefusesLargeTopologies) {
  const Topology t = LoadTopologyFile(DataPath("italy21.json"));
  Scenario s = LoadScenarioFile(DataPath("scenarios/weso1.json"));
  SimOptions options;
  options.mode = SolverMode::kExact;
  EXPECT_THROW(RunDay(t, s, options), BudgetExceededError);
  s.blackouts.push_back({99, 0.0, 2.0});
  EXPECT_THROW(RunDay(t, s), InputError);
}

TEST(RunDay, HeuristicDayOnBundledSample) {
  const Topology t = LoadTopologyFile(DataPath("italy21.json"));
  const Scenario s = LoadScenarioFile(DataPath("scenarios/weso1.json"));
  const DayResult day = RunDay(t, s);
  ASSERT_EQ(day.slots.size(), 12u);
  for (const SlotResult& r : day.slots) {
    EXPECT_TRUE(r.audit.ok());
    EXPECT_FALSE(r.grid_available[14]);
    EXPECT_GE(r.metrics.blocking_prob_volume, 0.0);
    EXPECT_LE(r.metrics.blocking_prob_volume, 1.0);
  }
  EXPECT_LT(day.final_residual_kwh[14], day.initial_residual_kwh[14]);
}

}  // namespace
}  // namespace gridshade
