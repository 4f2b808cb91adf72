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

#include "gridshade/heuristic.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "gridshade/errors.h"

namespace gridshade {
namespace {

using Index = std::size_t;

Index U(int v) { return static_cast<Index>(v); }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double TransitPenalty(const Weights& weights, const SourceCaps& caps_kw) {
  double cheapest = kInf;
  if (caps_kw.re_max_kw > 0.0) cheapest = std::min(cheapest, weights.alpha);
  if (caps_kw.br_max_kw > 0.0) cheapest = std::min(cheapest, weights.beta);
  if (caps_kw.bt_max_kw > 0.0) cheapest = std::min(cheapest, weights.gamma);
  if (cheapest == kInf || weights.beta <= 0.0) return 0.0;
  return std::max(-1.0, cheapest / weights.beta - 1.0);
}

HeuristicResult RouteHeuristic(const MilpInstance& instance) {
  const Topology& topo = instance.topology();
  const DevicePowers& dev = instance.devices();
  const auto& vars = instance.variables();
  const int n = topo.num_nodes();
  const auto demands = instance.demands();
  const int d_count = instance.num_demands();

  HeuristicResult result;
  result.config = NetworkConfiguration(topo);
  result.blocked.assign(U(d_count), false);

  std::vector<double> cap_w(U(n), 0.0);
  std::vector<double> load_w(U(n), 0.0);
  std::vector<double> penalty(U(n), 0.0);
  for (int i = 0; i < n; ++i) {
    cap_w[U(i)] = vars[U(instance.renewable(i))].upper +
                  vars[U(instance.grid(i))].upper +
                  vars[U(instance.battery(i))].upper;
    if (instance.powered(i)) load_w[U(i)] = instance.fixed_power_w(i);
    SourceCaps caps = instance.caps_kw()[U(i)];
    penalty[U(i)] = TransitPenalty(instance.weights(), caps);
  }
  std::vector<int> arc_free(U(topo.num_arcs()));
  for (int a = 0; a < topo.num_arcs(); ++a) {
    arc_free[U(a)] = static_cast<int>(
        std::floor(vars[U(instance.link_wavelengths(a))].upper + 1e-9));
  }

  std::vector<int> order(U(d_count));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Demand& x = demands[U(a)];
    const Demand& y = demands[U(b)];
    if (x.gbps != y.gbps) return x.gbps > y.gbps;
    return std::tie(x.s, x.d) < std::tie(y.s, y.d);
  });

  const double port_w = 0.5 * dev.router_port_w;
  auto lit_w = [&](int link) {
    return 0.5 * dev.transponder_w +
           0.5 * dev.regenerator_w * topo.links[U(link)].regenerators;
  };

  for (int k : order) {
    const Demand& dem = demands[U(k)];
    const int count = static_cast<int>(
        std::ceil(dem.gbps / topo.wavelength_capacity_gbps - 1e-9));
    std::vector<bool> excluded(U(n), false);
    bool routed = false;
    while (!routed) {
      if (!instance.powered(dem.s) || !instance.powered(dem.d) ||
          vars[U(instance.lightpath(dem.s, dem.d))].upper < count) {
        break;
      }
      // Dijkstra on (cost, hops); ties resolved by the lower node id.
      using Label = std::tuple<double, int, int>;
      std::vector<double> cost(U(n), kInf);
      std::vector<int> hops(U(n), 0);
      std::vector<int> via(U(n), -1);
      std::priority_queue<Label, std::vector<Label>, std::greater<>> open;
      cost[U(dem.s)] = 0.0;
      open.emplace(0.0, 0, dem.s);
      while (!open.empty()) {
        const auto [c, h, u] = open.top();
        open.pop();
        if (c > cost[U(u)] || (c == cost[U(u)] && h > hops[U(u)])) continue;
        if (u == dem.d) break;
        if (u != dem.s && (excluded[U(u)] || !instance.powered(u))) continue;
        const double step_from = u == dem.s ? 0.0 : penalty[U(u)];
        for (int a : topo.out_arcs(u)) {
          const Arc arc = topo.arc(a);
          if (arc_free[U(a)] < count) continue;
          if (vars[U(instance.routing(dem.s, dem.d, a))].upper < count) continue;
          if (!instance.powered(arc.to)) continue;
          const double nc = c + 1.0 + step_from;
          const int nh = h + 1;
          if (nc < cost[U(arc.to)] - 1e-12 ||
              (std::abs(nc - cost[U(arc.to)]) <= 1e-12 && nh < hops[U(arc.to)])) {
            cost[U(arc.to)] = nc;
            hops[U(arc.to)] = nh;
            via[U(arc.to)] = a;
            open.emplace(nc, nh, arc.to);
          }
        }
      }
      if (cost[U(dem.d)] == kInf) break;

      std::vector<int> path;
      for (int v = dem.d; v != dem.s; v = topo.arc(via[U(v)]).from) {
        path.push_back(via[U(v)]);
      }
      std::reverse(path.begin(), path.end());

      std::vector<double> extra(U(n), 0.0);
      extra[U(dem.s)] += count * port_w;
      extra[U(dem.d)] += count * port_w;
      for (int a : path) {
        const Arc arc = topo.arc(a);
        extra[U(arc.from)] += count * lit_w(arc.link);
        extra[U(arc.to)] += count * lit_w(arc.link);
      }
      int short_node = -1;
      for (int i = 0; i < n; ++i) {
        if (extra[U(i)] > 0.0 &&
            load_w[U(i)] + extra[U(i)] > cap_w[U(i)] - 1e-7) {
          short_node = i;
          break;
        }
      }
      if (short_node < 0) {
        result.config.AddLightpaths(dem.s, dem.d, path, count);
        for (int a : path) arc_free[U(a)] -= count;
        for (int i = 0; i < n; ++i) load_w[U(i)] += extra[U(i)];
        routed = true;
      } else if (short_node == dem.s || short_node == dem.d) {
        break;
      } else {
        excluded[U(short_node)] = true;
      }
    }
    result.blocked[U(k)] = !routed;
  }

  MilpSolution& sol = result.solution;
  sol.values.assign(U(instance.num_variables()), 0.0);
  StoreConfiguration(instance, result.config, sol.values);
  for (int k = 0; k < d_count; ++k) {
    const Demand& dem = demands[U(k)];
    if (result.blocked[U(k)]) {
      sol.values[U(instance.blocking(k))] = 1.0;
    } else {
      sol.values[U(instance.flow(k, dem.s, dem.d))] = dem.gbps;
    }
  }
  if (!StoreEnergySplit(instance, sol.values)) {
    throw SolverError("heuristic produced a node power above its source caps");
  }
  sol.objective = ObjectiveValue(instance, sol.values);
  return result;
}

}  // namespace gridshade
