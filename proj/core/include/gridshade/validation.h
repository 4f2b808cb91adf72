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

#ifndef GRIDSHADE_VALIDATION_H_
#define GRIDSHADE_VALIDATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridshade/audit.h"
#include "gridshade/bnb.h"
#include "gridshade/milp.h"
#include "gridshade/scenario.h"
#include "gridshade/sim.h"
#include "gridshade/topology.h"

namespace gridshade {

// Seeded generator of oracle-sized instances. Generators:
//   "two-node"           one link, up to two demands
//   "triangle-grid-out"  three nodes, one of them off the grid
//   "mixed"              2-4 nodes, random connected graph, mixed sources
struct InstanceFamily {
  std::string generator = "mixed";
  int max_nodes = 4;
  int max_wavelengths = 2;
  int max_demands = 4;
  std::uint64_t seed = 1;
};

struct GeneratedInstance {
  Topology topology;
  TrafficMatrix demands;
  std::vector<SourceCaps> caps_kw;
  Weights weights;
  std::string description;
};

// Throws InputError for an unknown generator or sizes beyond the oracle
// budget.
GeneratedInstance GenerateInstance(const InstanceFamily& family, int index);

// Running tally of AuditSolution results.
struct AuditTally {
  int solutions = 0;
  int failures = 0;
  double max_balance_error_w = 0.0;
  double max_network_error_w = 0.0;
  std::vector<std::string> first_issues;

  void Add(const AuditReport& report);
  void Merge(const AuditTally& other);
};

struct BatteryCase {
  int index = 0;
  std::string description;
  double bnb_objective = 0.0;
  double oracle_objective = 0.0;
  double relaxation_bound = 0.0;
  double heuristic_objective = 0.0;
  double bnb_seconds = 0.0;
  double oracle_seconds = 0.0;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
};

struct BatteryReport {
  std::string family;
  std::vector<BatteryCase> cases;
  AuditTally audit;

  int passed() const;
  int failed() const;
};

struct BatteryOptions {
  // Negative control: bump one lightpath count of the branch-and-bound
  // answer before it is checked.
  bool corrupt_incumbent = false;
  double objective_tol = 1e-6;
  BnbConfig bnb;
};

// For `count` seeded instances: branch-and-bound and the enumeration oracle
// agree within objective_tol, both answers pass CheckFeasibility and the
// power audit, the relaxation bounds the optimum from below and the
// heuristic is feasible and no better than the optimum.
BatteryReport OracleBattery(const InstanceFamily& family, int count,
                            const BatteryOptions& options = {});

// Four-node ring 0-1-2-3-0 with node 1 (the blackout node) holding a
// battery and optionally solar. Regenerators make the optical bypass
// through node 1 the cheapest way between 0 and 2; 0-3-2 is the grid
// detour. With detour = false the link 0-3 is dropped and node 1 is a cut
// node.
struct FixtureOptions {
  double battery_kwh = 40.0;
  double solar_peak_kw = 0.0;
  bool detour = true;
};

inline constexpr int kFixtureBlackoutNode = 1;

Topology BlackoutFixture(const FixtureOptions& options = {});

// Exact-mode day on the fixture: a 24 h blackout at node 1 (none when
// blackout = false), fixed demands 0->2, 2->0, 1->3 scaled by a mild
// diurnal profile.
Scenario FixtureScenario(const std::string& name, const Weights& weights,
                         bool blackout = true);

struct DaySummary {
  double battery_used_kwh = 0.0;   // at the blackout node
  double blocked_gbps = 0.0;
  double offered_gbps = 0.0;
  int blocked_count = 0;
  double max_transit_gbps = 0.0;   // through the blackout node
  std::vector<double> bt_kw;       // per slot, blackout node
  std::vector<double> transit_gbps;

  double blocking_volume() const {
    return offered_gbps > 0.0 ? blocked_gbps / offered_gbps : 0.0;
  }
};

DaySummary SummarizeDay(const DayResult& day, int node);

// Smallest battery (kWh, within tol_kwh) at `node` giving zero blocking over
// the day; hi_kwh must already achieve it. Throws SolverError otherwise.
double MinimumBatteryForZeroBlocking(const Topology& topology,
                                     const Scenario& scenario, int node,
                                     double hi_kwh, double tol_kwh,
                                     const SimOptions& options);

struct PropertyCheck {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  double blocking_min_battery_kwh = 0.0;
  double weso_battery_kwh = 0.0;
  AuditTally audit;

  bool pass() const;
};

// Checks, for every battery in `batteries_kwh` and every WESO row: WESO
// battery use <= blocking-min battery use, WESO day blocking <= blocking-min
// day blocking, and zero transit through the blackout node under WESO when a
// detour exists. Also checks that the zero-blocking battery under
// blocking-min is >= the one under WESO 1.
PropertyReport ScenarioPropertySuite(const FixtureOptions& fixture,
                                     std::span<const double> batteries_kwh,
                                     const SimOptions& options);

// Text rendering of a battery report, one line per failing case plus a
// total line.
std::string FormatBatteryReport(const BatteryReport& report);

}  // namespace gridshade

#endif  // GRIDSHADE_VALIDATION_H_
