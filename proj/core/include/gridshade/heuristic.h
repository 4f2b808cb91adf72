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

#ifndef GRIDSHADE_HEURISTIC_H_
#define GRIDSHADE_HEURISTIC_H_

#include <vector>

#include "gridshade/milp.h"
#include "gridshade/power.h"

namespace gridshade {

struct HeuristicResult {
  MilpSolution solution;
  NetworkConfiguration config;
  std::vector<bool> blocked;  // per instance demand
};

// Transit penalty of a node: weight of its cheapest source with headroom
// divided by the grid weight, minus one (never below -1).
double TransitPenalty(const Weights& weights, const SourceCaps& caps_kw);

// Min-cost routing for instances beyond exact-solver scale. Demands are
// taken by descending volume (ties by source, destination). Each gets
// ceil(volume / B) end-to-end lightpaths on the physical path minimizing
// hops plus the transit penalties of intermediate nodes, subject to
// residual fiber capacity and node energy headroom; otherwise it is
// blocked. The result always satisfies every model constraint.
HeuristicResult RouteHeuristic(const MilpInstance& instance);

}  // namespace gridshade

#endif  // GRIDSHADE_HEURISTIC_H_
