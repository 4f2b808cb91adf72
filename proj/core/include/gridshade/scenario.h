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

#ifndef GRIDSHADE_SCENARIO_H_
#define GRIDSHADE_SCENARIO_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridshade/demand.h"
#include "gridshade/milp.h"
#include "gridshade/topology.h"
#include "json.hpp"

namespace gridshade {

struct BlackoutEvent {
  int node = 0;
  double start_hour = 0.0;
  double end_hour = 24.0;

  bool operator==(const BlackoutEvent&) const = default;
};

enum class SolverMode { kExact, kHeuristic };

const char* SolverModeName(SolverMode mode);
// Throws InputError for anything but "exact" or "heuristic".
SolverMode ParseSolverMode(std::string_view text);

struct Scenario {
  std::string name;
  Weights weights;
  std::vector<BlackoutEvent> blackouts;
  DiurnalProfile profile = DefaultProfile();
  double busy_hour_total_gbps = 0.0;
  SolverMode solver = SolverMode::kHeuristic;
  // Busy-hour matrix used instead of the gravity model when present.
  std::optional<TrafficMatrix> busy_hour_demands;

  double slot_hours() const { return profile.slot_hours; }
};

// Checks weights, profile and blackout events against `topology`. One entry
// per problem; empty when valid.
std::vector<std::string> ValidateScenario(const Scenario& scenario,
                                          const Topology& topology);

// Parses a scenario document. Structural errors throw InputError; checks
// that need the topology are left to ValidateScenario.
Scenario ParseScenario(const nlohmann::json& document);
Scenario ParseScenario(std::string_view text);
Scenario LoadScenarioFile(const std::string& path);

nlohmann::json ScenarioToJson(const Scenario& scenario);

// Busy-hour traffic of the scenario on `topology`.
TrafficMatrix BusyHourMatrix(const Scenario& scenario, const Topology& topology);

}  // namespace gridshade

#endif  // GRIDSHADE_SCENARIO_H_
