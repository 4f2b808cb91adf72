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

#include "gridshade/sim.h"

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "gridshade/audit.h"
#include "gridshade/energy.h"
#include "gridshade/errors.h"
#include "gridshade/heuristic.h"
#include "spdlog/spdlog.h"

namespace gridshade {
namespace {

using Index = std::size_t;

Index U(int v) { return static_cast<Index>(v); }

std::vector<NodeEnergyConfig> EnergyConfigs(const Topology& topology,
                                            const Scenario& scenario) {
  std::vector<NodeEnergyConfig> configs(U(topology.num_nodes()));
  for (int i = 0; i < topology.num_nodes(); ++i) {
    configs[U(i)].equipment = topology.nodes[U(i)].equipment;
  }
  for (const BlackoutEvent& e : scenario.blackouts) {
    configs[U(e.node)].grid_outages.push_back(
        HourWindow{e.start_hour, e.end_hour});
  }
  return configs;
}

std::vector<double> GridBigM(const Topology& topology,
                             const DevicePowers& devices) {
  std::vector<double> kw;
  for (int i = 0; i < topology.num_nodes(); ++i) {
    kw.push_back(MaxNodePower(i, topology, devices) / 1000.0);
  }
  return kw;
}

void CheckScenario(const Topology& topology, const Scenario& scenario) {
  const std::vector<std::string> problems = ValidateScenario(scenario, topology);
  if (!problems.empty()) {
    std::string message = "invalid scenario";
    for (const std::string& p : problems) message += "; " + p;
    throw InputError(message);
  }
}

}  // namespace

std::vector<bool> ApplyBlackout(const Scenario& scenario, int num_nodes,
                                int slot) {
  std::vector<bool> grid(U(num_nodes), true);
  const double from = slot * scenario.slot_hours();
  const double to = from + scenario.slot_hours();
  for (const BlackoutEvent& e : scenario.blackouts) {
    if (e.node < 0 || e.node >= num_nodes) continue;
    if (HourWindow{e.start_hour, e.end_hour}.Intersects(from, to)) {
      grid[U(e.node)] = false;
    }
  }
  return grid;
}

SlotMetrics ComputeMetrics(const MilpInstance& instance,
                           std::span<const double> values) {
  SlotMetrics m;
  const Topology& topo = instance.topology();
  const int n = topo.num_nodes();
  const auto demands = instance.demands();
  for (int k = 0; k < instance.num_demands(); ++k) {
    const Demand& d = demands[U(k)];
    ++m.demand_count;
    m.offered_gbps += d.gbps;
    if (values[U(instance.blocking(k))] > 0.5) {
      ++m.blocked_count;
      m.blocked_gbps += d.gbps;
      continue;
    }
    double carried = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) carried += values[U(instance.flow(k, i, j))];
      }
    }
    m.virtual_hops_weighted += carried / d.gbps;
  }
  if (m.demand_count > 0) {
    m.blocking_prob_count =
        static_cast<double>(m.blocked_count) / m.demand_count;
  }
  if (m.offered_gbps > 0.0) {
    m.blocking_prob_volume = m.blocked_gbps / m.offered_gbps;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) {
        m.lightpath_count +=
            static_cast<int>(std::lround(values[U(instance.lightpath(i, j))]));
      }
    }
    m.re_kw.push_back(values[U(instance.renewable(i))] / 1000.0);
    m.br_kw.push_back(values[U(instance.grid(i))] / 1000.0);
    m.bt_kw.push_back(values[U(instance.battery(i))] / 1000.0);
  }
  return m;
}

std::vector<double> TransitGbps(const MilpInstance& instance,
                                std::span<const double> values) {
  const Topology& topo = instance.topology();
  const int n = topo.num_nodes();
  const auto demands = instance.demands();
  std::vector<double> transit(U(n), 0.0);
  for (int v = 0; v < n; ++v) {
    // Electronic transit: traffic leaving v's router for others' demands.
    for (int k = 0; k < instance.num_demands(); ++k) {
      if (demands[U(k)].s == v || demands[U(k)].d == v) continue;
      for (int j = 0; j < n; ++j) {
        if (j != v) transit[U(v)] += values[U(instance.flow(k, v, j))];
      }
    }
    // Optical pass-through: lightpaths switched at v, weighted by load.
    const std::vector<int> in = topo.in_arcs(v);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || i == v || j == v) continue;
        const double c = std::round(values[U(instance.lightpath(i, j))]);
        if (c < 0.5) continue;
        double through = 0.0;
        for (int a : in) through += std::round(values[U(instance.routing(i, j, a))]);
        if (through == 0.0) continue;
        double carried = 0.0;
        for (int k = 0; k < instance.num_demands(); ++k) {
          carried += values[U(instance.flow(k, i, j))];
        }
        transit[U(v)] += carried * through / c;
      }
    }
  }
  return transit;
}

SlotResult SolveSlot(const Topology& topology, const Scenario& scenario,
                     int slot, std::span<const double> residual_kwh,
                     const SimOptions& options) {
  const SolverMode mode = options.mode.value_or(scenario.solver);
  const int n = topology.num_nodes();
  if (static_cast<int>(residual_kwh.size()) != n) {
    throw std::invalid_argument("one battery residual per node required");
  }
  EnergyState state(EnergyConfigs(topology, scenario),
                    GridBigM(topology, options.devices), scenario.slot_hours());
  // Battery caps come from the caller's residuals, so a slot can be replayed
  // on its own.
  std::vector<SourceCaps> caps = state.AllCapsAt(slot);
  for (int i = 0; i < n; ++i) {
    caps[U(i)].bt_max_kw = residual_kwh[U(i)] / scenario.slot_hours();
  }

  const TrafficMatrix demands = DemandAtSlot(
      BusyHourMatrix(scenario, topology), scenario.profile, slot);
  const MilpInstance instance =
      BuildInstance(topology, demands, caps, scenario.weights, options.devices);

  SlotResult r;
  r.slot = slot;
  r.start_hour = slot * scenario.slot_hours();
  r.grid_available = ApplyBlackout(scenario, n, slot);
  r.powered = instance.powered_mask();
  r.demands.assign(instance.demands().begin(), instance.demands().end());

  const auto start = std::chrono::steady_clock::now();
  HeuristicResult heuristic = RouteHeuristic(instance);
  if (mode == SolverMode::kHeuristic) {
    r.solution = std::move(heuristic.solution);
    r.solver_status = "heuristic";
  } else if (options.exact_solver) {
    r.solution = options.exact_solver(instance);
    r.solver_status = "optimal";
  } else {
    BnbResult bnb = SolveBnb(instance, options.bnb, heuristic.solution);
    r.bnb_nodes = bnb.nodes;
    if (!bnb.has_solution) {
      throw SolverError("slot " + std::to_string(slot) +
                        ": branch-and-bound found no solution (" +
                        BnbStatusName(bnb.status) + ")");
    }
    if (bnb.status != BnbStatus::kOptimal) {
      spdlog::warn("slot {}: search limit reached, keeping best incumbent",
                   slot);
    }
    r.solution = std::move(bnb.solution);
    r.solver_status = BnbStatusName(bnb.status);
  }
  r.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  r.audit = AuditSolution(instance, r.solution.values);
  if (!r.audit.ok()) {
    throw SolverError("slot " + std::to_string(slot) +
                      ": solution failed audit: " + r.audit.issues.front());
  }
  r.config = ExtractConfiguration(instance, r.solution.values);
  r.network_power_w = ComputeNetworkPower(r.config, topology, options.devices,
                                          instance.powered_mask())
                          .total_w;
  r.metrics = ComputeMetrics(instance, r.solution.values);
  r.transit_gbps = TransitGbps(instance, r.solution.values);
  r.metrics.battery_residual_kwh.resize(U(n));
  for (int i = 0; i < n; ++i) {
    r.metrics.battery_residual_kwh[U(i)] = BatteryStep(
        residual_kwh[U(i)], r.metrics.bt_kw[U(i)], scenario.slot_hours());
  }
  spdlog::debug("slot {} [{}h]: {} blocked of {}, {:.1f} W, status {}", slot,
                r.start_hour, r.metrics.blocked_count, r.metrics.demand_count,
                r.network_power_w, r.solver_status);
  return r;
}

DayResult RunDay(const Topology& topology, const Scenario& scenario,
                 const SimOptions& options) {
  CheckScenario(topology, scenario);
  const SolverMode mode = options.mode.value_or(scenario.solver);
  if (mode == SolverMode::kExact && !options.force &&
      topology.num_nodes() > options.exact_node_budget) {
    throw BudgetExceededError(
        "exact solver refused: " + std::to_string(topology.num_nodes()) +
        " nodes exceeds the exact-mode budget of " +
        std::to_string(options.exact_node_budget) +
        " nodes (use --force to run anyway, or --solver heuristic)");
  }

  DayResult day;
  day.scenario_name = scenario.name;
  day.mode = mode;
  day.slot_hours = scenario.slot_hours();
  for (const Node& node : topology.nodes) {
    day.initial_residual_kwh.push_back(node.equipment.battery_kwh);
  }
  std::vector<double> residual = day.initial_residual_kwh;
  for (int slot = 0; slot < scenario.profile.num_slots(); ++slot) {
    SimOptions slot_options = options;
    slot_options.mode = mode;
    SlotResult r = SolveSlot(topology, scenario, slot, residual, slot_options);
    residual = r.metrics.battery_residual_kwh;
    spdlog::info("{}: slot {} done ({} blocked, {:.3f} s)", scenario.name,
                 slot, r.metrics.blocked_count, r.solve_seconds);
    day.slots.push_back(std::move(r));
  }
  day.final_residual_kwh = residual;
  return day;
}

}  // namespace gridshade
