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

#ifndef GRIDSHADE_ORACLE_H_
#define GRIDSHADE_ORACLE_H_

#include <cstdint>

#include "gridshade/milp.h"

namespace gridshade {

struct OracleBudget {
  int max_nodes = 4;
  int max_wavelengths_per_fiber = 2;
  int max_demands = 4;
};

struct OracleStats {
  std::int64_t served_sets = 0;
  std::int64_t capacity_vectors = 0;
  std::int64_t flow_checks = 0;
  std::int64_t routings = 0;
};

// Exhaustive optimum of a tiny instance, computed without the LP kernel or
// branch-and-bound. Blocking sets, lightpath counts and lightpath routes are
// enumerated; the flows of each candidate come from a small feasibility
// program and the energy split of each node is filled cheapest source first.
// Route choices are simple paths: a cycle in a wavelength route only adds
// equipment. Throws BudgetExceededError beyond `budget`.
MilpSolution EnumerateOracle(const MilpInstance& instance,
                             const OracleBudget& budget = {},
                             OracleStats* stats = nullptr);

}  // namespace gridshade

#endif  // GRIDSHADE_ORACLE_H_
