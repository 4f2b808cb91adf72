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

#ifndef GRIDSHADE_BNB_H_
#define GRIDSHADE_BNB_H_

#include <cstdint>
#include <optional>

#include "gridshade/lp.h"
#include "gridshade/milp.h"

namespace gridshade {

enum class BranchingRule {
  // Fractional part closest to 0.5, ties to the lowest variable index.
  kMostFractional,
};

struct BnbConfig {
  double integrality_tol = 1e-6;
  double objective_gap_tol = 1e-6;
  std::int64_t node_limit = 2'000'000;
  double time_limit_s = 600.0;
  BranchingRule branching = BranchingRule::kMostFractional;
  // Adds, for every demand, the rounding inequalities
  //   sum_j C_sj + n bl >= n  and  sum_i C_id + n bl >= n,  n = ceil(lambda/B),
  // and, per powered node, a cap on lightpath endpoints from its source
  // headroom. Both hold for every integral solution and only tighten the
  // bound.
  bool lightpath_rounding_rows = true;
  LpOptions lp;
};

enum class BnbStatus { kOptimal, kInfeasible, kLimit };

const char* BnbStatusName(BnbStatus status);

struct BnbResult {
  BnbStatus status = BnbStatus::kInfeasible;
  // Valid when has_solution; for kLimit it is the best incumbent found.
  bool has_solution = false;
  MilpSolution solution;
  double best_bound = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
};

// Best-bound branch-and-bound over the continuous relaxation. Integral LP
// points are polished: integers rounded and fixed, the continuous part
// re-solved and the energy split recomputed so the power balance holds exactly.
// `incumbent`, if given and feasible, seeds the upper bound.
BnbResult SolveBnb(const MilpInstance& instance, const BnbConfig& config = {},
                   const std::optional<MilpSolution>& incumbent = std::nullopt);

}  // namespace gridshade

#endif  // GRIDSHADE_BNB_H_
