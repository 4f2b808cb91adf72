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

#ifndef GRIDSHADE_SIM_H_
#define GRIDSHADE_SIM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridshade/audit.h"
#include "gridshade/bnb.h"
#include "gridshade/milp.h"
#include "gridshade/power.h"
#include "gridshade/scenario.h"
#include "gridshade/topology.h"

namespace gridshade {

struct SlotMetrics {
  int demand_count = 0;  // positive-volume demands offered in the slot
  int blocked_count = 0;
  double offered_gbps = 0.0;
  double blocked_gbps = 0.0;
  double blocking_prob_volume = 0.0;
  double blocking_prob_count = 0.0;
  // Sum over served demands of the flow-weighted number of virtual links.
  double virtual_hops_weighted = 0.0;
  int lightpath_count = 0;
  std::vector<double> re_kw;
  std::vector<double> br_kw;
  std::vector<double> bt_kw;
  // Residual at the end of the slot.
  std::vector<double> battery_residual_kwh;
};

struct SlotResult {
  int slot = 0;
  double start_hour = 0.0;
  std::vector<bool> grid_available;
  std::vector<bool> powered;
  std::vector<Demand> demands;
  MilpSolution solution;
  NetworkConfiguration config;
  SlotMetrics metrics;
  double network_power_w = 0.0;
  // Traffic carried through each node on behalf of demands that neither
  // start nor end there (IP transit plus optical pass-through), Gb/s.
  std::vector<double> transit_gbps;
  AuditReport audit;
  std::string solver_status;
  std::int64_t bnb_nodes = 0;
  double solve_seconds = 0.0;  // wall clock; not part of any output file
};

struct DayResult {
  std::string scenario_name;
  SolverMode mode = SolverMode::kHeuristic;
  double slot_hours = 2.0;
  std::vector<SlotResult> slots;
  std::vector<double> initial_residual_kwh;
  std::vector<double> final_residual_kwh;
};

struct SimOptions {
  // Overrides the scenario's solver mode when set.
  std::optional<SolverMode> mode;
  // Exact mode refuses topologies above this many nodes unless forced.
  int exact_node_budget = 6;
  bool force = false;
  BnbConfig bnb;
  DevicePowers devices;
  // Replaces branch-and-bound in exact mode when set (e.g. the enumeration
  // oracle on tiny fixtures).
  std::function<MilpSolution(const MilpInstance&)> exact_solver;
};

// Grid availability per node during `slot` (half-open windows).
std::vector<bool> ApplyBlackout(const Scenario& scenario, int num_nodes,
                                int slot);

SlotMetrics ComputeMetrics(const MilpInstance& instance,
                           std::span<const double> values);

std::vector<double> TransitGbps(const MilpInstance& instance,
                                std::span<const double> values);

// Solves one slot from the given battery residuals. Does not advance any
// state; RunDay chains these.
SlotResult SolveSlot(const Topology& topology, const Scenario& scenario,
                     int slot, std::span<const double> residual_kwh,
                     const SimOptions& options = {});

// Sequential day: every slot is solved from the residuals left by the
// previous one and the batteries are then drawn down by the chosen BT.
// Throws BudgetExceededError (exact mode over budget), InputError (invalid
// scenario) or SolverError (a slot failed; the message names the slot).
DayResult RunDay(const Topology& topology, const Scenario& scenario,
                 const SimOptions& options = {});

}  // namespace gridshade

#endif  // GRIDSHADE_SIM_H_
