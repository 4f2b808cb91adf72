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

#include "gridshade/validation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "gridshade/errors.h"
#include "gridshade/heuristic.h"
#include "gridshade/lp.h"
#include "gridshade/oracle.h"

namespace gridshade {
namespace {

using Index = std::size_t;

Index U(int v) { return static_cast<Index>(v); }

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int Int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double Real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  bool Chance(double p) { return Real(0.0, 1.0) < p; }

 private:
  std::mt19937_64 engine_;
};

Node MakeNode(int id) {
  Node n;
  n.id = id;
  n.name = "n" + std::to_string(id);
  n.population = 1.0;
  return n;
}

void AddLink(Topology& t, int m, int n, double km, int regenerators) {
  Link l;
  l.m = m;
  l.n = n;
  l.length_km = km;
  l.regenerators = regenerators;
  t.links.push_back(l);
}

Weights PickWeights(Rng& rng) {
  switch (rng.Int(0, 5)) {
    case 0:
      return BlockingMinWeights();
    case 1:
      return Weso1Weights();
    case 2:
      return Weso2Weights();
    case 3:
      return Weso3Weights();
    default: {
      // Random scheme with a blocking penalty low enough to compete with
      // equipment power.
      Weights w;
      w.alpha = std::round(rng.Real(0.5, 20.0) * 4.0) / 4.0;
      w.beta = std::round(rng.Real(0.5, 20.0) * 4.0) / 4.0;
      w.gamma = std::round(rng.Real(0.5, 20.0) * 4.0) / 4.0;
      w.delta = rng.Chance(0.5) ? 1e6 : std::round(rng.Real(500.0, 40000.0));
      return w;
    }
  }
}

SourceCaps RandomCaps(Rng& rng, const Topology& t, int node, bool grid) {
  SourceCaps c;
  if (grid) c.br_max_kw = MaxNodePower(node, t) / 1000.0;
  if (rng.Chance(0.4)) c.re_max_kw = std::round(rng.Real(0.0, 3.0) * 1000.0) / 1000.0;
  if (rng.Chance(0.6)) c.bt_max_kw = std::round(rng.Real(0.0, 4.0) * 1000.0) / 1000.0;
  return c;
}

void RandomDemands(Rng& rng, int nodes, int max_demands, TrafficMatrix& m) {
  const int wanted = rng.Int(1, max_demands);
  for (int tries = 0; tries < 50 && static_cast<int>(m.demands.size()) < wanted;
       ++tries) {
    const int s = rng.Int(0, nodes - 1);
    const int d = rng.Int(0, nodes - 1);
    if (s == d || m.demands.contains(NodePair{s, d})) continue;
    m.set(s, d, std::round(rng.Real(2.0, 70.0) * 2.0) / 2.0);
  }
}

std::string Describe(const GeneratedInstance& g) {
  std::ostringstream os;
  os << g.topology.num_nodes() << " nodes, " << g.topology.num_links()
     << " links, W=" << g.topology.wavelengths_per_fiber << ", "
     << g.demands.demands.size() << " demands, weights (" << g.weights.alpha
     << "," << g.weights.beta << "," << g.weights.gamma << ","
     << g.weights.delta << ")";
  return os.str();
}

}  // namespace

GeneratedInstance GenerateInstance(const InstanceFamily& family, int index) {
  if (family.max_nodes > 4 || family.max_wavelengths > 2 ||
      family.max_demands > 4 || family.max_nodes < 2 ||
      family.max_wavelengths < 1 || family.max_demands < 1) {
    throw InputError("instance family outside the enumeration budget");
  }
  Rng rng(family.seed * 1000003ULL + static_cast<std::uint64_t>(index));
  GeneratedInstance g;
  Topology& t = g.topology;
  t.wavelengths_per_fiber = rng.Int(1, family.max_wavelengths);

  if (family.generator == "two-node") {
    t.nodes = {MakeNode(0), MakeNode(1)};
    AddLink(t, 0, 1, std::round(rng.Real(30.0, 260.0)), rng.Int(0, 2));
    RandomDemands(rng, 2, std::min(2, family.max_demands), g.demands);
    for (int i = 0; i < 2; ++i) {
      g.caps_kw.push_back(RandomCaps(rng, t, i, rng.Chance(0.7)));
    }
  } else if (family.generator == "triangle-grid-out") {
    if (family.max_nodes < 3) throw InputError("triangle family needs 3 nodes");
    t.nodes = {MakeNode(0), MakeNode(1), MakeNode(2)};
    AddLink(t, 0, 1, std::round(rng.Real(30.0, 260.0)), rng.Int(0, 2));
    AddLink(t, 1, 2, std::round(rng.Real(30.0, 260.0)), rng.Int(0, 2));
    AddLink(t, 0, 2, std::round(rng.Real(30.0, 260.0)), rng.Int(0, 2));
    RandomDemands(rng, 3, family.max_demands, g.demands);
    const int dark = rng.Int(0, 2);
    for (int i = 0; i < 3; ++i) {
      SourceCaps c;
      if (i == dark) {
        c.bt_max_kw = std::round(rng.Real(0.2, 4.0) * 1000.0) / 1000.0;
        if (rng.Chance(0.3)) {
          c.re_max_kw = std::round(rng.Real(0.0, 2.0) * 1000.0) / 1000.0;
        }
      } else {
        c.br_max_kw = MaxNodePower(i, t) / 1000.0;
      }
      g.caps_kw.push_back(c);
    }
  } else if (family.generator == "mixed") {
    const int n = rng.Int(2, family.max_nodes);
    for (int i = 0; i < n; ++i) t.nodes.push_back(MakeNode(i));
    std::set<std::pair<int, int>> used;
    for (int i = 1; i < n; ++i) {
      const int j = rng.Int(0, i - 1);
      used.emplace(j, i);
      AddLink(t, j, i, std::round(rng.Real(30.0, 260.0)), rng.Int(0, 2));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (used.contains({i, j}) || !rng.Chance(0.4)) continue;
        AddLink(t, i, j, std::round(rng.Real(30.0, 260.0)), rng.Int(0, 2));
      }
    }
    RandomDemands(rng, n, family.max_demands, g.demands);
    for (int i = 0; i < n; ++i) {
      g.caps_kw.push_back(RandomCaps(rng, t, i, rng.Chance(0.6)));
    }
  } else {
    throw InputError("unknown instance generator '" + family.generator + "'");
  }
  g.weights = PickWeights(rng);
  g.description = Describe(g);
  return g;
}

void AuditTally::Add(const AuditReport& report) {
  ++solutions;
  max_balance_error_w = std::max(max_balance_error_w, report.max_balance_error_w);
  max_network_error_w = std::max(max_network_error_w, report.network_error_w);
  if (!report.ok()) {
    ++failures;
    if (first_issues.size() < 5) first_issues.push_back(report.issues.front());
  }
}

void AuditTally::Merge(const AuditTally& other) {
  solutions += other.solutions;
  failures += other.failures;
  max_balance_error_w = std::max(max_balance_error_w, other.max_balance_error_w);
  max_network_error_w = std::max(max_network_error_w, other.max_network_error_w);
  for (const std::string& s : other.first_issues) {
    if (first_issues.size() < 5) first_issues.push_back(s);
  }
}

int BatteryReport::passed() const {
  return static_cast<int>(std::count_if(cases.begin(), cases.end(),
                                        [](const BatteryCase& c) { return c.pass(); }));
}

int BatteryReport::failed() const {
  return static_cast<int>(cases.size()) - passed();
}

BatteryReport OracleBattery(const InstanceFamily& family, int count,
                            const BatteryOptions& options) {
  BatteryReport report;
  report.family = family.generator;
  for (int index = 0; index < count; ++index) {
    const GeneratedInstance g = GenerateInstance(family, index);
    const MilpInstance instance =
        BuildInstance(g.topology, g.demands, g.caps_kw, g.weights);
    BatteryCase c;
    c.index = index;
    c.description = g.description;

    auto start = std::chrono::steady_clock::now();
    const HeuristicResult heuristic = RouteHeuristic(instance);
    BnbResult bnb = SolveBnb(instance, options.bnb, heuristic.solution);
    c.bnb_seconds = Seconds(start);
    start = std::chrono::steady_clock::now();
    const MilpSolution oracle = EnumerateOracle(instance);
    c.oracle_seconds = Seconds(start);

    const LpResult relaxation = SolveLp(Relaxation(instance));
    c.relaxation_bound = relaxation.objective;
    c.heuristic_objective = heuristic.solution.objective;
    c.oracle_objective = oracle.objective;

    if (bnb.status != BnbStatus::kOptimal) {
      c.failures.push_back(std::string("branch-and-bound status ") +
                           BnbStatusName(bnb.status));
    }
    if (bnb.has_solution) {
      if (options.corrupt_incumbent) {
        const Topology& t = instance.topology();
        bnb.solution.values[U(instance.lightpath(0, t.num_nodes() - 1))] += 1.0;
      }
      c.bnb_objective = ObjectiveValue(instance, bnb.solution.values);
      const std::vector<Violation> v = CheckFeasibility(instance, bnb.solution.values);
      if (!v.empty()) {
        c.failures.push_back("branch-and-bound answer infeasible: " + v.front().message);
      }
      const AuditReport audit = AuditSolution(instance, bnb.solution.values);
      report.audit.Add(audit);
    }
    if (const auto v = CheckFeasibility(instance, oracle.values); !v.empty()) {
      c.failures.push_back("oracle answer infeasible: " + v.front().message);
    }
    report.audit.Add(AuditSolution(instance, oracle.values));
    if (const auto v = CheckFeasibility(instance, heuristic.solution.values);
        !v.empty()) {
      c.failures.push_back("heuristic answer infeasible: " + v.front().message);
    }
    report.audit.Add(AuditSolution(instance, heuristic.solution.values));

    std::ostringstream os;
    os.precision(12);
    if (std::abs(c.bnb_objective - c.oracle_objective) > options.objective_tol) {
      os << "objective mismatch: branch-and-bound " << c.bnb_objective
         << " vs oracle " << c.oracle_objective;
      c.failures.push_back(os.str());
    }
    if (relaxation.status != LpStatus::kOptimal ||
        c.relaxation_bound > c.oracle_objective + options.objective_tol) {
      c.failures.push_back("relaxation does not bound the optimum");
    }
    if (c.heuristic_objective < c.oracle_objective - options.objective_tol) {
      c.failures.push_back("heuristic beats the optimum");
    }
    report.cases.push_back(std::move(c));
  }
  return report;
}

std::string FormatBatteryReport(const BatteryReport& report) {
  std::ostringstream os;
  os.precision(10);
  for (const BatteryCase& c : report.cases) {
    if (c.pass()) continue;
    os << report.family << " #" << c.index << " [" << c.description << "]: "
       << c.failures.front() << "\n";
  }
  os << report.family << ": " << report.passed() << "/" << report.cases.size()
     << " pass\n";
  return os.str();
}

Topology BlackoutFixture(const FixtureOptions& options) {
  Topology t;
  t.wavelengths_per_fiber = 2;
  for (int i = 0; i < 4; ++i) t.nodes.push_back(MakeNode(i));
  t.nodes[1].equipment.battery_kwh = options.battery_kwh;
  t.nodes[1].equipment.solar_peak_kw = options.solar_peak_kw;
  AddLink(t, 0, 1, 100.0, 1);
  AddLink(t, 1, 2, 100.0, 2);
  if (options.detour) AddLink(t, 0, 3, 100.0, 2);
  AddLink(t, 3, 2, 100.0, 2);
  return t;
}

Scenario FixtureScenario(const std::string& name, const Weights& weights,
                         bool blackout) {
  Scenario s;
  s.name = name;
  s.weights = weights;
  if (blackout) s.blackouts.push_back(BlackoutEvent{kFixtureBlackoutNode, 0.0, 24.0});
  // Never below 0.8 so that node 1's own lightpath has no room for the
  // 0<->2 traffic.
  s.profile = DiurnalProfile{
      2.0, {0.90, 0.85, 0.80, 0.82, 0.86, 0.90, 0.92, 0.94, 0.95, 0.96, 0.98, 1.00}};
  s.solver = SolverMode::kExact;
  TrafficMatrix m;
  m.set(0, 2, 30.0);
  m.set(2, 0, 36.0);
  m.set(1, 3, 24.0);
  s.busy_hour_demands = m;
  return s;
}

DaySummary SummarizeDay(const DayResult& day, int node) {
  DaySummary s;
  s.battery_used_kwh =
      day.initial_residual_kwh[U(node)] - day.final_residual_kwh[U(node)];
  for (const SlotResult& r : day.slots) {
    s.blocked_gbps += r.metrics.blocked_gbps;
    s.offered_gbps += r.metrics.offered_gbps;
    s.blocked_count += r.metrics.blocked_count;
    s.bt_kw.push_back(r.metrics.bt_kw[U(node)]);
    s.transit_gbps.push_back(r.transit_gbps[U(node)]);
    s.max_transit_gbps = std::max(s.max_transit_gbps, r.transit_gbps[U(node)]);
  }
  return s;
}

double MinimumBatteryForZeroBlocking(const Topology& topology,
                                     const Scenario& scenario, int node,
                                     double hi_kwh, double tol_kwh,
                                     const SimOptions& options) {
  auto blocks = [&](double kwh) {
    Topology t = topology;
    t.nodes[U(node)].equipment.battery_kwh = kwh;
    const DayResult day = RunDay(t, scenario, options);
    return SummarizeDay(day, node).blocked_count > 0;
  };
  if (blocks(hi_kwh)) {
    throw SolverError("battery search: " + std::to_string(hi_kwh) +
                      " kWh still blocks");
  }
  double lo = 0.0;
  double hi = hi_kwh;
  if (!blocks(lo)) return 0.0;
  while (hi - lo > tol_kwh) {
    const double mid = 0.5 * (lo + hi);
    if (blocks(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

bool PropertyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) {
    return c.pass || c.skipped;
  });
}

PropertyReport ScenarioPropertySuite(const FixtureOptions& fixture,
                                     std::span<const double> batteries_kwh,
                                     const SimOptions& options) {
  PropertyReport report;
  const int b = kFixtureBlackoutNode;
  const std::vector<std::pair<std::string, Weights>> weso = {
      {"weso1", Weso1Weights()}, {"weso2", Weso2Weights()}, {"weso3", Weso3Weights()}};

  PropertyCheck a{"battery use: weso <= blocking-min", true, false, ""};
  PropertyCheck bb{"day blocking: weso <= blocking-min", true, false, ""};
  PropertyCheck c{"no transit through the blackout node under weso", true,
                  !fixture.detour, ""};
  std::ostringstream da;
  std::ostringstream db;
  std::ostringstream dc;
  da.precision(6);
  db.precision(6);
  dc.precision(6);
  for (double kwh : batteries_kwh) {
    FixtureOptions f = fixture;
    f.battery_kwh = kwh;
    const Topology topo = BlackoutFixture(f);
    auto run = [&](const Scenario& scenario) {
      const DayResult day = RunDay(topo, scenario, options);
      for (const SlotResult& r : day.slots) report.audit.Add(r.audit);
      return SummarizeDay(day, b);
    };
    const DaySummary ref =
        run(FixtureScenario("blocking-min", BlockingMinWeights()));
    for (const auto& [name, w] : weso) {
      const DaySummary s = run(FixtureScenario(name, w));
      if (s.battery_used_kwh > ref.battery_used_kwh + 1e-6) {
        a.pass = false;
        da << name << "@" << kwh << "kWh " << s.battery_used_kwh << " > "
           << ref.battery_used_kwh << "; ";
      }
      if (s.blocking_volume() > ref.blocking_volume() + 1e-9 ||
          s.blocked_count > ref.blocked_count) {
        bb.pass = false;
        db << name << "@" << kwh << "kWh " << s.blocking_volume() << " > "
           << ref.blocking_volume() << "; ";
      }
      if (!c.skipped && s.max_transit_gbps > 1e-6) {
        c.pass = false;
        dc << name << "@" << kwh << "kWh transit " << s.max_transit_gbps << "; ";
      }
    }
  }
  a.detail = a.pass ? "holds for every battery size and weso row" : da.str();
  bb.detail = bb.pass ? "holds for every battery size and weso row" : db.str();
  c.detail = c.skipped ? "no detour in this fixture"
                       : (c.pass ? "zero in every slot" : dc.str());
  if (c.skipped) c.pass = false;
  report.checks.push_back(a);
  report.checks.push_back(bb);
  report.checks.push_back(c);

  PropertyCheck d{"zero-blocking battery: blocking-min >= weso", false, false, ""};
  const double hi = *std::max_element(batteries_kwh.begin(), batteries_kwh.end());
  const Topology topo = BlackoutFixture(fixture);
  try {
    report.blocking_min_battery_kwh = MinimumBatteryForZeroBlocking(
        topo, FixtureScenario("blocking-min", BlockingMinWeights()), b, hi, 0.01,
        options);
    report.weso_battery_kwh = MinimumBatteryForZeroBlocking(
        topo, FixtureScenario("weso1", Weso1Weights()), b, hi, 0.01, options);
    d.pass = report.blocking_min_battery_kwh >= report.weso_battery_kwh;
    std::ostringstream os;
    os.precision(6);
    os << "blocking-min " << report.blocking_min_battery_kwh << " kWh, weso1 "
       << report.weso_battery_kwh << " kWh";
    d.detail = os.str();
  } catch (const SolverError& e) {
    d.detail = e.what();
  }
  report.checks.push_back(d);
  return report;
}

}  // namespace gridshade
