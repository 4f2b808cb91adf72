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

#include "gridshade/heuristic.h"
#include "gridshade/milp.h"
#include "gridshade/oracle.h"
#include "gridshade/validation.h"
#include "test_util.h"

namespace gridshade {
namespace {

using testing::AllGrid;
using testing::MakeTopology;

TEST(TransitPenalty, FollowsCheapestAvailableSource) {
  const SourceCaps grid{0.0, 0.0, 5.0};
  const SourceCaps battery{0.0, 5.0, 0.0};
  const SourceCaps solar_battery{2.0, 5.0, 0.0};
  EXPECT_EQ(TransitPenalty(Weso1Weights(), grid), 0.0);
  EXPECT_EQ(TransitPenalty(Weso1Weights(), battery), 9.0);
  EXPECT_NEAR(TransitPenalty(Weso1Weights(), solar_battery), -0.9, 1e-12);
  EXPECT_EQ(TransitPenalty(BlockingMinWeights(), battery), 0.0);
  EXPECT_NEAR(TransitPenalty(Weso3Weights(), battery), 25.0 / 15.0 - 1.0, 1e-12);
}

TEST(RouteHeuristic, AllGridIsMinHop) {
  // Two hops through node 1 against three through nodes 3 and 4.
  const Topology t = MakeTopology(
      5, {{0, 1, 400.0}, {1, 2, 400.0}, {0, 3, 50.0}, {3, 4, 50.0}, {4, 2, 50.0}});
  TrafficMatrix d;
  d.set(0, 2, 25.0);
  const MilpInstance inst = BuildInstance(t, d, AllGrid(5), Weso2Weights());
  const HeuristicResult h = RouteHeuristic(inst);
  EXPECT_FALSE(h.blocked[0]);
  EXPECT_EQ(h.config.lightpaths(0, 2), 1);
  EXPECT_EQ(h.config.routed(0, 2, *t.find_arc(0, 1)), 1);
  EXPECT_EQ(h.config.routed(0, 2, *t.find_arc(1, 2)), 1);
  EXPECT_EQ(h.config.routed(0, 2, *t.find_arc(0, 3)), 0);
  EXPECT_TRUE(CheckFeasibility(inst, h.solution.values).empty());
}

TEST(RouteHeuristic, BatteryPenaltyBreaksHopTie) {
  const Topology t = MakeTopology(4, {{0, 1}, {1, 2}, {0, 3}, {3, 2}});
  TrafficMatrix d;
  d.set(0, 2, 60.0);
  std::vector<SourceCaps> caps = AllGrid(4);
  caps[1] = SourceCaps{0.0, 20.0, 0.0};
  const MilpInstance inst = BuildInstance(t, d, caps, Weso1Weights());
  const HeuristicResult h = RouteHeuristic(inst);
  ASSERT_FALSE(h.blocked[0]);
  EXPECT_EQ(h.config.lightpaths(0, 2), 2);
  EXPECT_EQ(h.config.routed(0, 2, *t.find_arc(0, 3)), 2);
  EXPECT_EQ(h.config.routed(0, 2, *t.find_arc(0, 1)), 0);
  EXPECT_TRUE(CheckFeasibility(inst, h.solution.values).empty());
}

TEST(RouteHeuristic, BlocksBehindZeroEnergyNode) {
  const Topology t = MakeTopology(4, {{0, 1}, {1, 2}, {2, 3}});
  TrafficMatrix d;
  d.set(0, 3, 10.0);
  d.set(2, 3, 10.0);
  std::vector<SourceCaps> caps = AllGrid(4);
  caps[1] = SourceCaps{0.0, 0.0, 0.0};
  const MilpInstance inst = BuildInstance(t, d, caps, BlockingMinWeights());
  const HeuristicResult h = RouteHeuristic(inst);
  ASSERT_EQ(inst.num_demands(), 2);
  EXPECT_TRUE(h.blocked[0]);   // 0 -> 3
  EXPECT_FALSE(h.blocked[1]);  // 2 -> 3
  EXPECT_TRUE(CheckFeasibility(inst, h.solution.values).empty());
}

TEST(RouteHeuristic, DetoursAroundNodeShortOnEnergy) {
  // Node 1 can light its switch and amplifiers but not a transit wavelength.
  const Topology t = MakeTopology(4, {{0, 1}, {1, 2}, {0, 3, 300.0}, {3, 2, 300.0}});
  TrafficMatrix d;
  d.set(0, 2, 10.0);
  std::vector<SourceCaps> caps = AllGrid(4);
  caps[1] = SourceCaps{0.0, 0.3, 0.0};
  const MilpInstance inst = BuildInstance(t, d, caps, BlockingMinWeights());
  ASSERT_TRUE(inst.powered(1));
  const HeuristicResult h = RouteHeuristic(inst);
  ASSERT_FALSE(h.blocked[0]);
  EXPECT_EQ(h.config.routed(0, 2, *t.find_arc(0, 3)), 1);
  EXPECT_TRUE(CheckFeasibility(inst, h.solution.values).empty());
}

TEST(RouteHeuristic, FeasibleAndNeverBelowOptimum) {
  for (const char* generator : {"two-node", "triangle-grid-out", "mixed"}) {
    InstanceFamily family;
    family.generator = generator;
    family.seed = 77;
    for (int i = 0; i < 15; ++i) {
      const GeneratedInstance g = GenerateInstance(family, i);
      const MilpInstance inst =
          BuildInstance(g.topology, g.demands, g.caps_kw, g.weights);
      const HeuristicResult h = RouteHeuristic(inst);
      EXPECT_TRUE(CheckFeasibility(inst, h.solution.values).empty()) << g.description;
      EXPECT_GE(h.solution.objective, EnumerateOracle(inst).objective - 1e-6)
          << g.description;
    }
  }
}

TEST(RouteHeuristic, Deterministic) {
  InstanceFamily family;
  family.seed = 3;
  const GeneratedInstance g = GenerateInstance(family, 9);
  const MilpInstance inst = BuildInstance(g.topology, g.demands, g.caps_kw, g.weights);
  EXPECT_EQ(RouteHeuristic(inst).solution.values, RouteHeuristic(inst).solution.values);
}

}  // namespace
}  // namespace gridshade
