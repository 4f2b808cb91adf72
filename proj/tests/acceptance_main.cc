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


// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// all of them pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gridshade/audit.h"
#include "gridshade/energy.h"
#include "gridshade/errors.h"
#include "gridshade/heuristic.h"
#include "gridshade/milp.h"
#include "gridshade/oracle.h"
#include "gridshade/power.h"
#include "gridshade/report.h"
#include "gridshade/scenario.h"
#include "gridshade/sim.h"
#include "gridshade/topology.h"
#include "gridshade/validation.h"

namespace gridshade {
namespace {

constexpr double kObjectiveTol = 1e-6;
constexpr double kPowerTol = 1e-6;    // W
constexpr double kEnergyTol = 1e-9;   // kWh

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t U(int v) { return static_cast<std::size_t>(v); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

// Every solution produced by this binary goes through here.
AuditTally g_audit;

void AuditDay(const DayResult& day) {
  for (const SlotResult& r : day.slots) g_audit.Add(r.audit);
}

std::vector<Weights> WesoRows() {
  return {Weso1Weights(), Weso2Weights(), Weso3Weights()};
}

std::string DataPath(const std::string& rel) {
  return std::string(GRIDSHADE_DATA_DIR) + "/" + rel;
}

void Report(int id, const std::string& name, const Outcome& o, double seconds) {
  std::printf("%s  %d  %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id,
              name.c_str(), seconds, o.detail.str().c_str());
  std::fflush(stdout);
}

// Oracle equivalence on seeded random instances.
Outcome OracleEquivalence() {
  Outcome o;
  const auto start = Clock::now();
  int total = 0;
  int passed = 0;
  std::string failures;
  for (const char* generator : {"two-node", "triangle-grid-out", "mixed"}) {
    InstanceFamily family;
    family.generator = generator;
    family.seed = 20260101;
    BatteryOptions options;
    options.objective_tol = kObjectiveTol;
    const BatteryReport r = OracleBattery(family, 40, options);
    total += static_cast<int>(r.cases.size());
    passed += r.passed();
    g_audit.Merge(r.audit);
    if (r.failed() > 0) failures += FormatBatteryReport(r);
  }
  const double seconds = Since(start);
  if (total < 100) o.Fail("fewer than 100 instances");
  if (passed != total) o.Fail(failures);
  if (seconds > 300.0) o.Fail("over 5 min");
  if (o.pass) o.detail << passed << "/" << total << " instances agree";
  return o;
}

// Power formula examples.
Outcome PowerFixture() {
  Outcome o;
  Topology t;
  t.wavelengths_per_fiber = 2;
  for (int i = 0; i < 2; ++i) {
    Node n;
    n.id = i;
    n.name = "n" + std::to_string(i);
    t.nodes.push_back(n);
  }
  Link l;
  l.m = 0;
  l.n = 1;
  l.length_km = 160.0;
  t.links.push_back(l);
  NetworkConfiguration empty(t);
  const double empty_total = ComputeNetworkPower(empty, t).total_w;
  NetworkConfiguration one(t);
  const std::vector<int> path{0};
  one.AddLightpaths(0, 1, path, 1);
  const double node_total = NodePower(0, one, t).total_w;
  if (node_total != 663.5) o.Fail("single lightpath node " + std::to_string(node_total));
  if (empty_total != 335.0) o.Fail("empty network " + std::to_string(empty_total));
  if (o.pass) o.detail << "663.5 W node, 335 W empty network";
  return o;
}

// Weight-scheme behavior on the blackout fixture, branch-and-bound against
// the oracle slot by slot.
Outcome WeightSchemes() {
  Outcome o;
  const auto start = Clock::now();
  const Topology topo = BlackoutFixture();
  const int b = kFixtureBlackoutNode;
  SimOptions oracle;
  oracle.exact_solver = [](const MilpInstance& inst) {
    MilpSolution s = EnumerateOracle(inst);
    g_audit.Add(AuditSolution(inst, s.values));
    return s;
  };
  auto check_against_oracle = [&](const Scenario& s, const DayResult& day) {
    std::vector<double> residual = day.initial_residual_kwh;
    for (const SlotResult& r : day.slots) {
      const SlotResult ref = SolveSlot(topo, s, r.slot, residual, oracle);
      if (std::abs(ref.solution.objective - r.solution.objective) > kObjectiveTol) {
        o.Fail(s.name + " slot " + std::to_string(r.slot) + " differs from oracle");
      }
      residual = r.metrics.battery_residual_kwh;
    }
  };

  const Scenario bm = FixtureScenario("blocking-min", BlockingMinWeights());
  const DayResult bm_day = RunDay(topo, bm);
  AuditDay(bm_day);
  check_against_oracle(bm, bm_day);
  double worst_transit = 0.0;
  int chained_exceptions = 0;
  int compared = 0;
  int row = 0;
  for (const Weights& w : WesoRows()) {
    const Scenario s = FixtureScenario("weso" + std::to_string(++row), w);
    const DayResult day = RunDay(topo, s);
    AuditDay(day);
    check_against_oracle(s, day);
    for (std::size_t k = 0; k < day.slots.size(); ++k) {
      const double transit = day.slots[k].transit_gbps[U(b)];
      worst_transit = std::max(worst_transit, transit);
      if (transit > kObjectiveTol) {
        o.Fail(s.name + " transit through the blackout node in slot " +
               std::to_string(k));
      }
      if (day.slots[k].metrics.bt_kw[U(b)] >
          bm_day.slots[k].metrics.bt_kw[U(b)] + kObjectiveTol) {
        ++chained_exceptions;
      }
    }
    // Both schemes solved from the same battery state, along each day's
    // residuals in turn.
    for (const DayResult* path : {&day, &bm_day}) {
      std::vector<double> residual = path->initial_residual_kwh;
      for (const SlotResult& r : path->slots) {
        const SlotResult a = SolveSlot(topo, s, r.slot, residual);
        const SlotResult c = SolveSlot(topo, bm, r.slot, residual);
        g_audit.Add(a.audit);
        g_audit.Add(c.audit);
        ++compared;
        if (a.metrics.bt_kw[U(b)] > c.metrics.bt_kw[U(b)] + kObjectiveTol) {
          o.Fail(s.name + " draws more battery than blocking-min in slot " +
                 std::to_string(r.slot));
        }
        residual = r.metrics.battery_residual_kwh;
      }
    }
  }
  const double seconds = Since(start);
  if (seconds > 120.0) o.Fail("over 2 min");
  if (o.pass) {
    o.detail << "max weso transit " << worst_transit << " Gb/s, battery draw "
             << "<= blocking-min in " << compared << " same-state slot pairs";
  }
  o.detail << "; chained days: " << chained_exceptions
           << " slots where blocking-min had already drained its battery";
  return o;
}

// Residuals telescope over a day.
Outcome BatteryCarryover() {
  Outcome o;
  std::vector<std::pair<Topology, Scenario>> runs;
  for (double kwh : {8.0, 40.0}) {
    FixtureOptions f;
    f.battery_kwh = kwh;
    f.solar_peak_kw = kwh < 10.0 ? 0.0 : 1.0;
    runs.emplace_back(BlackoutFixture(f),
                      FixtureScenario("blocking-min", BlockingMinWeights()));
    runs.emplace_back(BlackoutFixture(f), FixtureScenario("weso3", Weso3Weights()));
  }
  Topology italy = LoadTopologyFile(DataPath("italy21.json"));
  runs.emplace_back(italy, LoadScenarioFile(DataPath("scenarios/weso1.json")));
  double worst = 0.0;
  for (const auto& [topo, scenario] : runs) {
    const DayResult day = RunDay(topo, scenario);
    AuditDay(day);
    if (day.slots.size() != 12 || day.slot_hours != 2.0) o.Fail("not 12 x 2 h");
    for (int i = 0; i < topo.num_nodes(); ++i) {
      double prev = day.initial_residual_kwh[U(i)];
      double drawn = 0.0;
      for (const SlotResult& r : day.slots) {
        const double now = r.metrics.battery_residual_kwh[U(i)];
        if (now > prev) o.Fail(scenario.name + " residual increases");
        if (now < 0.0) o.Fail(scenario.name + " negative residual");
        drawn += r.metrics.bt_kw[U(i)] * day.slot_hours;
        prev = now;
      }
      const double drift = std::abs(
          (day.initial_residual_kwh[U(i)] - day.final_residual_kwh[U(i)]) - drawn);
      worst = std::max(worst, drift);
    }
  }
  if (worst > kEnergyTol) o.Fail("telescoping drift " + std::to_string(worst));
  if (o.pass) o.detail << "max drift " << worst << " kWh over " << runs.size() << " days";
  return o;
}

// Solar by day, battery by night at the blackout node under WESO 1.
Outcome SolarShape() {
  Outcome o;
  FixtureOptions f;
  f.solar_peak_kw = 3.0;
  const Topology topo = BlackoutFixture(f);
  const int b = kFixtureBlackoutNode;
  const DayResult day = RunDay(topo, FixtureScenario("weso1", Weso1Weights()));
  AuditDay(day);
  const SourceEquipment& eq = topo.nodes[U(b)].equipment;
  int covered_day_slots = 0;
  int twilight_slots = 0;
  int dark_draw_slots = 0;
  for (const SlotResult& r : day.slots) {
    const std::string at = " at " + std::to_string(r.start_hour) + " h";
    const double cap = RenewableCapKw(eq, r.start_hour, day.slot_hours);
    const double re = r.metrics.re_kw[U(b)];
    const double bt = r.metrics.bt_kw[U(b)];
    const double need = re + r.metrics.br_kw[U(b)] + bt;
    if (!r.powered[U(b)]) continue;
    if (cap + 1e-9 >= need) {
      if (cap > 0.0) ++covered_day_slots;
      if (bt > 1e-9) o.Fail("battery draw while solar covers the node" + at);
    } else if (bt > 1e-9) {
      // Renewable short of the load: battery only tops it up.
      if (cap > 0.0) {
        ++twilight_slots;
        if (re < cap - 1e-9) o.Fail("battery used before solar is exhausted" + at);
      } else {
        ++dark_draw_slots;
      }
    }
  }
  if (covered_day_slots == 0) o.Fail("no daylight slot covers the node");
  if (dark_draw_slots == 0) o.Fail("battery never used after dark");
  if (o.pass) {
    o.detail << covered_day_slots << " solar-only daylight slots, battery in "
             << dark_draw_slots << " dark and " << twilight_slots
             << " twilight slots (solar at cap)";
  }
  return o;
}

// Minimum zero-blocking battery, blocking-min vs WESO 1.
Outcome BatterySizing() {
  Outcome o;
  const auto start = Clock::now();
  const Topology topo = BlackoutFixture();
  const int b = kFixtureBlackoutNode;
  const double bm = MinimumBatteryForZeroBlocking(
      topo, FixtureScenario("blocking-min", BlockingMinWeights()), b, 200.0, 0.01,
      SimOptions{});
  const double weso = MinimumBatteryForZeroBlocking(
      topo, FixtureScenario("weso1", Weso1Weights()), b, 200.0, 0.01, SimOptions{});
  const double seconds = Since(start);
  if (!(bm > weso)) o.Fail("blocking-min does not need more");
  if (seconds > 300.0) o.Fail("over 5 min");
  o.detail << (o.pass ? "" : "; ") << "blocking-min " << bm << " kWh, weso1 "
           << weso << " kWh";
  return o;
}

// Heuristic feasibility and optimality gap sign on oracle-sized slots, then
// the bundled 21-node day.
Outcome HeuristicAdmissibility() {
  Outcome o;
  int checked = 0;
  auto check = [&](const MilpInstance& inst, const std::string& label) {
    const HeuristicResult h = RouteHeuristic(inst);
    g_audit.Add(AuditSolution(inst, h.solution.values));
    const MilpSolution best = EnumerateOracle(inst);
    g_audit.Add(AuditSolution(inst, best.values));
    ++checked;
    if (!CheckFeasibility(inst, h.solution.values, 1e-6).empty()) {
      o.Fail(label + " heuristic infeasible");
    }
    if (h.solution.objective < best.objective - kObjectiveTol) {
      o.Fail(label + " heuristic beats the optimum");
    }
  };
  for (const char* generator : {"two-node", "triangle-grid-out", "mixed"}) {
    InstanceFamily family;
    family.generator = generator;
    family.seed = 77;
    for (int i = 0; i < 40; ++i) {
      const GeneratedInstance g = GenerateInstance(family, i);
      check(BuildInstance(g.topology, g.demands, g.caps_kw, g.weights, DevicePowers{}),
            g.description);
    }
  }
  // Fixture slots, with the residuals of an exact day.
  const Topology topo = BlackoutFixture();
  for (const Weights& w : {BlockingMinWeights(), Weso1Weights()}) {
    const Scenario s = FixtureScenario("fixture", w);
    const DayResult day = RunDay(topo, s);
    AuditDay(day);
    SimOptions heuristic;
    heuristic.mode = SolverMode::kHeuristic;
    std::vector<double> residual = day.initial_residual_kwh;
    for (const SlotResult& r : day.slots) {
      const SlotResult hr = SolveSlot(topo, s, r.slot, residual, heuristic);
      g_audit.Add(hr.audit);
      ++checked;
      if (hr.solution.objective < r.solution.objective - kObjectiveTol) {
        o.Fail("fixture slot " + std::to_string(r.slot) + " heuristic beats exact");
      }
      residual = r.metrics.battery_residual_kwh;
    }
  }

  const auto start = Clock::now();
  const Topology italy = LoadTopologyFile(DataPath("italy21.json"));
  SimOptions options;
  options.mode = SolverMode::kHeuristic;
  const DayResult day =
      RunDay(italy, LoadScenarioFile(DataPath("scenarios/weso1.json")), options);
  const double seconds = Since(start);
  AuditDay(day);
  if (seconds > 60.0) o.Fail("21-node day over 60 s");
  if (o.pass) {
    o.detail << checked << " slots admissible; 21-node day in " << seconds << " s";
  }
  return o;
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Two CLI runs per scenario, compared byte for byte.
Outcome Determinism() {
  Outcome o;
  const std::filesystem::path root =
      std::filesystem::temp_directory_path() / "gridshade_acceptance";
  std::filesystem::remove_all(root);
  struct Run {
    std::string topology;
    std::string scenario;
  };
  const std::vector<Run> runs{
      {DataPath("fixtures/ring4.json"), DataPath("fixtures/weso1.json")},
      {DataPath("fixtures/ring4_solar.json"), DataPath("fixtures/blocking_min.json")},
      {DataPath("italy21.json"), DataPath("scenarios/weso2.json")},
  };
  int compared = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::vector<std::filesystem::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const std::filesystem::path dir =
          root / ("run" + std::to_string(k) + "_" + std::to_string(rep));
      const std::string out_dir = dir.string();
      const char* argv[] = {"gridshade", "--topology", runs[k].topology.c_str(),
                            "--scenario", runs[k].scenario.c_str(), "--out",
                            out_dir.c_str()};
      std::ostringstream out;
      std::ostringstream err;
      if (CliMain(7, argv, out, err) != 0) {
        o.Fail("run failed: " + err.str());
        return o;
      }
      dirs.push_back(dir);
    }
    for (const char* name : {"power.csv", "metrics.csv", "summary.txt", "manifest.json"}) {
      const std::string a = ReadFile(dirs[0] / name);
      const std::string b = ReadFile(dirs[1] / name);
      ++compared;
      if (a.empty() || a != b) o.Fail(std::string(name) + " differs for " + runs[k].scenario);
    }
  }
  std::filesystem::remove_all(root);
  if (o.pass) o.detail << compared << " file pairs identical";
  return o;
}

int Run() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", OracleEquivalence},
      {3, "power formula", PowerFixture},
      {4, "weight schemes", WeightSchemes},
      {5, "battery carryover", BatteryCarryover},
      {6, "solar day shape", SolarShape},
      {7, "battery sizing", BatterySizing},
      {8, "heuristic admissibility", HeuristicAdmissibility},
      {9, "determinism", Determinism},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.Fail(std::string("exception: ") + e.what());
    }
    Report(c.id, c.name, o, Since(start));
    all = all && o.pass;
  }
  // The audit tally covers every solution produced above.
  Outcome audit;
  if (g_audit.failures > 0) {
    audit.Fail(std::to_string(g_audit.failures) + " failing audits, first: " +
               (g_audit.first_issues.empty() ? "" : g_audit.first_issues.front()));
  }
  if (g_audit.max_balance_error_w > kPowerTol ||
      g_audit.max_network_error_w > kPowerTol) {
    audit.Fail("balance error above 1e-6 W");
  }
  if (g_audit.solutions == 0) audit.Fail("nothing audited");
  if (audit.pass) {
    audit.detail << g_audit.solutions << " solutions, max node error "
                 << g_audit.max_balance_error_w << " W, max network error "
                 << g_audit.max_network_error_w << " W";
  }
  Report(2, "constraint audit", audit, 0.0);
  all = all && audit.pass;
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}

}  // namespace
}  // namespace gridshade

int main() { return gridshade::Run(); }
