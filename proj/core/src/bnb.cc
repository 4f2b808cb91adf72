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

#include "gridshade/bnb.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridshade/errors.h"

namespace gridshade {

const char* BnbStatusName(BnbStatus status) {
  switch (status) {
    case BnbStatus::kOptimal:
      return "optimal";
    case BnbStatus::kInfeasible:
      return "infeasible";
    case BnbStatus::kLimit:
      return "limit";
  }
  return "?";
}

namespace {

using Index = std::size_t;

// One branching decision; bounds of a node are the root box tightened by
// every record on its path to the root.
struct NodeRecord {
  int parent = -1;
  int var = -1;
  double bound = 0.0;
  bool is_upper = false;
  double lp_bound = 0.0;
};

struct QueueEntry {
  double bound;
  int id;
  // std::priority_queue pops the largest element.
  bool operator<(const QueueEntry& other) const {
    if (bound != other.bound) return bound > other.bound;
    return id > other.id;
  }
};

bool IsIntegerVar(const Variable& v) { return v.type != VarType::kContinuous; }

// Integer values rounded and fixed, continuous part re-solved. Returns
// nullopt if the fixed problem turns out infeasible.
std::optional<MilpSolution> Polish(const MilpInstance& instance,
                                   const LpProblem& base,
                                   const std::vector<double>& values,
                                   const LpOptions& options,
                                   std::int64_t* iterations) {
  LpProblem fixed = base;
  const auto& vars = instance.variables();
  for (Index v = 0; v < vars.size(); ++v) {
    if (!IsIntegerVar(vars[v])) continue;
    const double r = std::round(values[v]);
    fixed.lower[v] = r;
    fixed.upper[v] = r;
  }
  const LpResult lp = SolveLp(fixed, options);
  *iterations += lp.iterations;
  if (lp.status != LpStatus::kOptimal) return std::nullopt;
  MilpSolution sol;
  sol.values = lp.values;
  for (Index v = 0; v < vars.size(); ++v) {
    if (IsIntegerVar(vars[v])) sol.values[v] = fixed.lower[v];
  }
  if (!StoreEnergySplit(instance, sol.values)) return std::nullopt;
  if (!CheckFeasibility(instance, sol.values).empty()) return std::nullopt;
  sol.objective = ObjectiveValue(instance, sol.values);
  return sol;
}

void AddRoundingRows(const MilpInstance& instance, LpProblem& lp) {
  const Topology& topo = instance.topology();
  const auto demands = instance.demands();
  for (int k = 0; k < instance.num_demands(); ++k) {
    const Demand& d = demands[static_cast<Index>(k)];
    const double n = std::ceil(d.gbps / topo.wavelength_capacity_gbps - 1e-9);
    std::vector<Term> out{{instance.blocking(k), n}};
    std::vector<Term> in{{instance.blocking(k), n}};
    for (int v = 0; v < topo.num_nodes(); ++v) {
      if (v != d.s) out.push_back({instance.lightpath(d.s, v), 1.0});
      if (v != d.d) in.push_back({instance.lightpath(v, d.d), 1.0});
    }
    lp.AddRow(std::move(out), RowSense::kGreaterEqual, n);
    lp.AddRow(std::move(in), RowSense::kGreaterEqual, n);
  }

  // Every lightpath ending at v costs a router port plus at least one lit
  // wavelength on the cheapest incident link, so the node's source caps bound
  // the number of endpoints it can carry. Demands needing more are blocked.
  const DevicePowers& dev = instance.devices();
  std::vector<double> max_endpoints(static_cast<Index>(topo.num_nodes()), 0.0);
  for (int v = 0; v < topo.num_nodes(); ++v) {
    if (!instance.powered(v) || topo.incident_links(v).empty()) continue;
    double cheapest = kInfinity;
    for (int k : topo.incident_links(v)) {
      cheapest = std::min(
          cheapest, 0.5 * dev.transponder_w +
                        0.5 * dev.regenerator_w *
                            topo.links[static_cast<Index>(k)].regenerators);
    }
    const double per_endpoint = 0.5 * dev.router_port_w + cheapest;
    const SourceCaps& c = instance.caps_kw()[static_cast<Index>(v)];
    const double headroom =
        1000.0 * (c.re_max_kw + c.br_max_kw + c.bt_max_kw) - instance.fixed_power_w(v);
    if (per_endpoint <= 0.0) {
      max_endpoints[static_cast<Index>(v)] = kInfinity;
      continue;
    }
    const double m = std::floor(std::max(0.0, headroom) / per_endpoint + 1e-9);
    max_endpoints[static_cast<Index>(v)] = m;
    std::vector<Term> ends;
    for (int u = 0; u < topo.num_nodes(); ++u) {
      if (u == v) continue;
      ends.push_back({instance.lightpath(v, u), 1.0});
      ends.push_back({instance.lightpath(u, v), 1.0});
    }
    lp.AddRow(std::move(ends), RowSense::kLessEqual, m);
  }
  for (int k = 0; k < instance.num_demands(); ++k) {
    const Demand& d = demands[static_cast<Index>(k)];
    const double n = std::ceil(d.gbps / topo.wavelength_capacity_gbps - 1e-9);
    if (n > max_endpoints[static_cast<Index>(d.s)] ||
        n > max_endpoints[static_cast<Index>(d.d)]) {
      lp.lower[static_cast<Index>(instance.blocking(k))] =
          lp.upper[static_cast<Index>(instance.blocking(k))];
    }
  }
}

}  // namespace

BnbResult SolveBnb(const MilpInstance& instance, const BnbConfig& config,
                   const std::optional<MilpSolution>& incumbent) {
  if (!(config.integrality_tol > 0.0) || !(config.objective_gap_tol > 0.0)) {
    throw std::invalid_argument("branch-and-bound tolerances must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  LpProblem root = Relaxation(instance);
  if (config.lightpath_rounding_rows) AddRoundingRows(instance, root);
  const auto& vars = instance.variables();

  BnbResult result;
  double best = kInfinity;
  if (incumbent.has_value() &&
      incumbent->values.size() == vars.size() &&
      CheckFeasibility(instance, incumbent->values).empty()) {
    result.has_solution = true;
    result.solution = *incumbent;
    result.solution.objective = ObjectiveValue(instance, incumbent->values);
    best = result.solution.objective;
  }

  std::vector<NodeRecord> nodes;
  nodes.push_back(NodeRecord{-1, -1, 0.0, false, -kInfinity});
  std::priority_queue<QueueEntry> open;
  open.push(QueueEntry{-kInfinity, 0});

  LpProblem work = root;
  bool limited = false;
  double open_bound_at_stop = kInfinity;
  while (!open.empty()) {
    const QueueEntry top = open.top();
    if (top.bound >= best - config.objective_gap_tol) break;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (result.nodes >= config.node_limit || elapsed > config.time_limit_s) {
      limited = true;
      open_bound_at_stop = top.bound;
      break;
    }
    open.pop();
    ++result.nodes;

    work.lower = root.lower;
    work.upper = root.upper;
    for (int id = top.id; nodes[static_cast<Index>(id)].parent >= 0;
         id = nodes[static_cast<Index>(id)].parent) {
      const NodeRecord& rec = nodes[static_cast<Index>(id)];
      const auto v = static_cast<Index>(rec.var);
      if (rec.is_upper) {
        work.upper[v] = std::min(work.upper[v], rec.bound);
      } else {
        work.lower[v] = std::max(work.lower[v], rec.bound);
      }
    }

    const LpResult lp = SolveLp(work, config.lp);
    result.lp_iterations += lp.iterations;
    if (lp.status == LpStatus::kInfeasible) continue;
    if (lp.status == LpStatus::kUnbounded) {
      throw SolverError("relaxation unbounded; variable bounds are missing");
    }
    if (lp.objective >= best - config.objective_gap_tol) continue;

    int branch_var = -1;
    double branch_score = kInfinity;
    for (Index v = 0; v < vars.size(); ++v) {
      if (!IsIntegerVar(vars[v])) continue;
      const double x = lp.values[v];
      const double frac = x - std::floor(x);
      if (frac <= config.integrality_tol || frac >= 1.0 - config.integrality_tol) {
        continue;
      }
      const double score = std::abs(frac - 0.5);
      if (score < branch_score) {
        branch_score = score;
        branch_var = static_cast<int>(v);
      }
    }

    if (branch_var < 0) {
      std::optional<MilpSolution> sol =
          Polish(instance, work, lp.values, config.lp, &result.lp_iterations);
      if (sol.has_value() && sol->objective < best) {
        best = sol->objective;
        result.solution = std::move(*sol);
        result.has_solution = true;
      }
      continue;
    }

    const double x = lp.values[static_cast<Index>(branch_var)];
    const int parent = top.id;
    nodes.push_back(
        NodeRecord{parent, branch_var, std::floor(x), true, lp.objective});
    open.push(QueueEntry{lp.objective, static_cast<int>(nodes.size()) - 1});
    nodes.push_back(
        NodeRecord{parent, branch_var, std::ceil(x), false, lp.objective});
    open.push(QueueEntry{lp.objective, static_cast<int>(nodes.size()) - 1});
  }

  if (limited) {
    result.status = BnbStatus::kLimit;
    result.best_bound = std::min(best, open_bound_at_stop);
  } else if (result.has_solution) {
    result.status = BnbStatus::kOptimal;
    result.best_bound = best;
  } else {
    result.status = BnbStatus::kInfeasible;
    result.best_bound = kInfinity;
  }
  return result;
}

}  // namespace gridshade
