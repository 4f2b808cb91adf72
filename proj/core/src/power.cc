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

#include "gridshade/power.h"

#include <stdexcept>
#include <string>

namespace gridshade {

NetworkConfiguration::NetworkConfiguration(int num_nodes, int num_arcs)
    : num_nodes_(num_nodes),
      num_arcs_(num_arcs),
      lightpaths_(static_cast<std::size_t>(num_nodes) *
                      static_cast<std::size_t>(num_nodes),
                  0),
      wavelengths_(static_cast<std::size_t>(num_arcs), 0),
      routing_(static_cast<std::size_t>(num_nodes) *
                   static_cast<std::size_t>(num_nodes) *
                   static_cast<std::size_t>(num_arcs),
               0) {}

void NetworkConfiguration::AddLightpaths(int i, int j,
                                         std::span<const int> arc_path,
                                         int count) {
  lightpaths(i, j) += count;
  for (int a : arc_path) {
    routed(i, j, a) += count;
    link_wavelengths(a) += count;
  }
}

bool NetworkConfiguration::WavelengthSumsConsistent() const {
  for (int a = 0; a < num_arcs_; ++a) {
    int sum = 0;
    for (int i = 0; i < num_nodes_; ++i) {
      for (int j = 0; j < num_nodes_; ++j) sum += routed(i, j, a);
    }
    if (sum != link_wavelengths(a)) return false;
  }
  return true;
}

NodePowerBreakdown NodePower(int node, const NetworkConfiguration& config,
                             const Topology& topology,
                             const DevicePowers& devices) {
  if (node < 0 || node >= topology.num_nodes()) {
    throw std::out_of_range("node " + std::to_string(node) +
                            " not in topology");
  }
  NodePowerBreakdown b;
  int terminated = 0;
  for (int j = 0; j < topology.num_nodes(); ++j) {
    if (j == node) continue;
    terminated += config.lightpaths(node, j) + config.lightpaths(j, node);
  }
  b.router_w = 0.5 * devices.router_port_w * terminated;

  for (int k : topology.incident_links(node)) {
    const Link& link = topology.links[static_cast<std::size_t>(k)];
    const int lit =
        config.link_wavelengths(2 * k) + config.link_wavelengths(2 * k + 1);
    b.transponder_w += 0.5 * devices.transponder_w * lit;
    b.regenerator_w += 0.5 * devices.regenerator_w * link.regenerators * lit;
    b.edfa_w += 0.5 * devices.edfa_w * link.fibers * topology.amplifiers(k);
  }
  b.switch_w = devices.optical_switch_w;
  b.total_w =
      b.router_w + b.transponder_w + b.edfa_w + b.regenerator_w + b.switch_w;
  return b;
}

NetworkPower ComputeNetworkPower(const NetworkConfiguration& config,
                                 const Topology& topology,
                                 const DevicePowers& devices,
                                 const std::vector<bool>& powered) {
  NetworkPower result;
  result.nodes.resize(static_cast<std::size_t>(topology.num_nodes()));
  for (int i = 0; i < topology.num_nodes(); ++i) {
    if (!powered.empty() && !powered[static_cast<std::size_t>(i)]) continue;
    result.nodes[static_cast<std::size_t>(i)] =
        NodePower(i, config, topology, devices);
    result.total_w += result.nodes[static_cast<std::size_t>(i)].total_w;
  }
  return result;
}

double FixedNodePower(int node, const Topology& topology,
                      const DevicePowers& devices) {
  double watts = devices.optical_switch_w;
  for (int k : topology.incident_links(node)) {
    watts += 0.5 * devices.edfa_w *
             topology.links[static_cast<std::size_t>(k)].fibers *
             topology.amplifiers(k);
  }
  return watts;
}

int MaxLightpathsAt(int node, const Topology& topology) {
  int capacity = 0;
  for (int k : topology.incident_links(node)) capacity += topology.arc_capacity(k);
  return capacity;
}

double MaxNodePower(int node, const Topology& topology,
                    const DevicePowers& devices) {
  double watts = FixedNodePower(node, topology, devices);
  // Lightpaths terminating here (either direction) are limited by the
  // incident fiber capacity in each direction.
  watts += 0.5 * devices.router_port_w * 2.0 * MaxLightpathsAt(node, topology);
  for (int k : topology.incident_links(node)) {
    const double lit = 2.0 * topology.arc_capacity(k);
    watts += 0.5 * devices.transponder_w * lit;
    watts += 0.5 * devices.regenerator_w *
             topology.links[static_cast<std::size_t>(k)].regenerators * lit;
  }
  return watts;
}

}  // namespace gridshade
