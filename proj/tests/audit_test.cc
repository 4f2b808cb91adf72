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

#include "gridshade/audit.h"
#include "gridshade/heuristic.h"
#include "gridshade/milp.h"
#include "gridshade/validation.h"
#include "test_util.h"

namespace gridshade {
namespace {

std::size_t At(int var) { return static_cast<std::size_t>(var); }

MilpInstance Sample(int index) {
  InstanceFamily family;
  family.seed = 41;
  const GeneratedInstance g = GenerateInstance(family, index);
  return BuildInstance(g.topology, g.demands, g.caps_kw, g.weights);
}

TEST(AuditSolution, AcceptsConsistentSolutions) {
  for (int i = 0; i < 10; ++i) {
    const MilpInstance inst = Sample(i);
    const AuditReport r = AuditSolution(inst, RouteHeuristic(inst).solution.values);
    EXPECT_TRUE(r.ok()) << (r.issues.empty() ? "" : r.issues.front());
    EXPECT_LE(r.max_balance_error_w, 1e-6);
    EXPECT_LE(r.network_error_w, 1e-6);
  }
}

TEST(AuditSolution, FlagsSourceMismatch) {
  const MilpInstance inst = Sample(0);
  std::vector<double> x = RouteHeuristic(inst).solution.values;
  x[At(inst.grid(0))] += 1.0;
  const AuditReport r = AuditSolution(inst, x);
  EXPECT_FALSE(r.ok());
  EXPECT_NEAR(r.max_balance_error_w, 1.0, 1e-9);
  EXPECT_NEAR(r.network_error_w, 1.0, 1e-9);
}

TEST(AuditSolution, FlagsWrongLength) {
  const MilpInstance inst = Sample(1);
  std::vector<double> x(3, 0.0);
  EXPECT_FALSE(AuditSolution(inst, x).ok());
}

TEST(AuditTally, AccumulatesWorstErrors) {
  AuditTally a, b;
  AuditReport good;
  AuditReport bad;
  bad.issues.push_back("node 0 off");
  bad.max_balance_error_w = 2.0;
  bad.network_error_w = 3.0;
  a.Add(good);
  b.Add(bad);
  b.Add(good);
  a.Merge(b);
  EXPECT_EQ(a.solutions, 3);
  EXPECT_EQ(a.failures, 1);
  EXPECT_EQ(a.max_balance_error_w, 2.0);
  EXPECT_EQ(a.max_network_error_w, 3.0);
  ASSERT_FALSE(a.first_issues.empty());
}

}  // namespace
}  // namespace gridshade
