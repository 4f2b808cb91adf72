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


#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "gridshade/demand.h"
#include "gridshade/errors.h"

namespace gridshade {
namespace {

TEST(GravityMatrix, EqualPopulationsSplitEvenly) {
  const std::vector<double> pop{1.0, 1.0, 1.0};
  const TrafficMatrix m = GravityMatrix(pop, 60.0);
  ASSERT_EQ(m.demands.size(), 6u);
  for (const auto& [pair, gbps] : m.demands) {
    EXPECT_NE(pair.s, pair.d);
    EXPECT_DOUBLE_EQ(gbps, 10.0);
  }
}

TEST(GravityMatrix, ZeroPopulationGetsNothing) {
  const std::vector<double> pop{1.0, 0.0, 3.0};
  const TrafficMatrix m = GravityMatrix(pop, 60.0);
  for (int other : {0, 2}) {
    EXPECT_EQ(m.at(1, other), 0.0);
    EXPECT_EQ(m.at(other, 1), 0.0);
  }
  EXPECT_NEAR(TotalOffered(m), 60.0, 1e-12);
}

TEST(GravityMatrix, TwoNodesSymmetric) {
  const std::vector<double> pop{2.0, 1.0};
  const TrafficMatrix m = GravityMatrix(pop, 12.0);
  EXPECT_DOUBLE_EQ(m.at(0, 1), 6.0);
  EXPECT_DOUBLE_EQ(m.at(1, 0), 6.0);
}

TEST(GravityMatrix, Errors) {
  EXPECT_THROW(GravityMatrix(std::vector<double>{1.0}, 10.0), InputError);
  EXPECT_THROW(GravityMatrix(std::vector<double>{0.0, 0.0, 0.0}, 10.0), InputError);
  EXPECT_THROW(GravityMatrix(std::vector<double>{1.0, 1.0}, 0.0), InputError);
}

TEST(GravityMatrix, ScaleFreeAndConserving) {
  const std::vector<double> pop{0.3, 2.2, 1.7, 4.0, 0.9};
  std::vector<double> scaled = pop;
  for (double& p : scaled) p *= 37.5;
  const TrafficMatrix a = GravityMatrix(pop, 1234.5);
  const TrafficMatrix b = GravityMatrix(scaled, 1234.5);
  ASSERT_EQ(a.demands.size(), b.demands.size());
  for (const auto& [pair, gbps] : a.demands) {
    EXPECT_NEAR(gbps, b.at(pair.s, pair.d), 1e-9 * gbps);
  }
  EXPECT_NEAR(TotalOffered(a), 1234.5, 1e-9 * 1234.5);
}

TEST(DemandAtSlot, PeakNormalization) {
  TrafficMatrix base;
  base.set(0, 1, 40.0);
  base.set(1, 0, 10.0);
  DiurnalProfile p = DefaultProfile();
  ASSERT_EQ(p.num_slots(), 12);
  // busiest slot is 22:00-24:00
  const TrafficMatrix peak = DemandAtSlot(base, p, 11);
  EXPECT_EQ(peak.at(0, 1), 40.0);
  EXPECT_EQ(peak.at(1, 0), 10.0);

  p.values.assign(12, 1.0);
  p.values[3] = 0.0;
  p.values[5] = 0.5;
  EXPECT_EQ(TotalOffered(DemandAtSlot(base, p, 3)), 0.0);
  EXPECT_DOUBLE_EQ(DemandAtSlot(base, p, 5).at(0, 1), 20.0);
  EXPECT_THROW(DemandAtSlot(base, p, 12), InputError);
  EXPECT_THROW(DemandAtSlot(base, p, -1), InputError);
}

TEST(DemandAtSlot, LinearInProfile) {
  TrafficMatrix base;
  base.set(2, 0, 17.0);
  const DiurnalProfile p = DefaultProfile();
  double sum = 0.0, sum_values = 0.0, max_value = 0.0;
  for (int s = 0; s < p.num_slots(); ++s) {
    sum += DemandAtSlot(base, p, s).at(2, 0);
    sum_values += p.values[static_cast<std::size_t>(s)];
    max_value = std::max(max_value, p.values[static_cast<std::size_t>(s)]);
  }
  EXPECT_NEAR(sum, 17.0 * sum_values / max_value, 1e-9);
}

TEST(TotalOffered, Examples) {
  EXPECT_EQ(TotalOffered(TrafficMatrix{}), 0.0);
  TrafficMatrix m;
  m.set(0, 1, 10.0);
  m.set(1, 0, 5.0);
  EXPECT_EQ(TotalOffered(m), 15.0);
  EXPECT_THROW(m.set(1, 1, 3.0), InputError);
}

TEST(DiurnalProfile, Validation) {
  DiurnalProfile p = DefaultProfile();
  EXPECT_NO_THROW(p.Validate());
  p.values.pop_back();
  EXPECT_THROW(p.Validate(), InputError);
  p = DefaultProfile();
  p.values.assign(12, 0.0);
  EXPECT_THROW(p.Validate(), InputError);
  p.values.assign(12, 1.0);
  p.values[0] = -0.1;
  EXPECT_THROW(p.Validate(), InputError);
}

}  // namespace
}  // namespace gridshade
