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

#ifndef GRIDSHADE_POWER_H_
#define GRIDSHADE_POWER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "gridshade/topology.h"

namespace gridshade {

// Per-device power draw in watts. Defaults are the reference core-network
// values (router port 825 W, transponder 167 W, optical switch 85 W,
// EDFA 55 W, regenerator 334 W).
struct DevicePowers {
  double router_port_w = 825.0;
  double transponder_w = 167.0;
  double optical_switch_w = 85.0;
  double edfa_w = 55.0;
  double regenerator_w = 334.0;
};

// Integer part of a routing decision:
//   lightpaths(i, j)     C_ij, parallel lightpaths on virtual link i->j
//   link_wavelengths(a)  W_mn, wavelengths lit on arc a = (m, n)
//   routed(i, j, a)      W^ij_mn, wavelengths of virtual link i->j on arc a
class NetworkConfiguration {
 public:
  NetworkConfiguration() = default;
  NetworkConfiguration(int num_nodes, int num_arcs);
  explicit NetworkConfiguration(const Topology& topology)
      : NetworkConfiguration(topology.num_nodes(), topology.num_arcs()) {}

  int num_nodes() const { return num_nodes_; }
  int num_arcs() const { return num_arcs_; }

  int& lightpaths(int i, int j) { return lightpaths_[PairIndex(i, j)]; }
  int lightpaths(int i, int j) const { return lightpaths_[PairIndex(i, j)]; }
  int& link_wavelengths(int arc) {
    return wavelengths_[static_cast<std::size_t>(arc)];
  }
  int link_wavelengths(int arc) const {
    return wavelengths_[static_cast<std::size_t>(arc)];
  }
  int& routed(int i, int j, int arc) {
    return routing_[PairIndex(i, j) * static_cast<std::size_t>(num_arcs_) +
                    static_cast<std::size_t>(arc)];
  }
  int routed(int i, int j, int arc) const {
    return routing_[PairIndex(i, j) * static_cast<std::size_t>(num_arcs_) +
                    static_cast<std::size_t>(arc)];
  }

  // Adds `count` lightpaths i->j routed along `arc_path` and updates W_mn.
  void AddLightpaths(int i, int j, std::span<const int> arc_path, int count);

  // W_mn == sum_ij W^ij_mn for every arc.
  bool WavelengthSumsConsistent() const;

  bool operator==(const NetworkConfiguration&) const = default;

 private:
  std::size_t PairIndex(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(num_nodes_) +
           static_cast<std::size_t>(j);
  }

  int num_nodes_ = 0;
  int num_arcs_ = 0;
  std::vector<int> lightpaths_;
  std::vector<int> wavelengths_;
  std::vector<int> routing_;
};

struct NodePowerBreakdown {
  double router_w = 0.0;
  double transponder_w = 0.0;
  double edfa_w = 0.0;
  double regenerator_w = 0.0;
  double switch_w = 0.0;
  double total_w = 0.0;
};

struct NetworkPower {
  double total_w = 0.0;
  std::vector<NodePowerBreakdown> nodes;
};

// Power drawn by the equipment of node i. Link-borne terms (transponders,
// EDFAs, regenerators) are split half and half between the two endpoints;
// router ports are charged half per lightpath endpoint. Throws
// std::out_of_range for an unknown node.
NodePowerBreakdown NodePower(int node, const NetworkConfiguration& config,
                             const Topology& topology,
                             const DevicePowers& devices = {});

// Sum of NodePower over all nodes. Nodes with powered[i] == false are shut
// down for the slot and contribute nothing; an empty mask means every node is
// up.
NetworkPower ComputeNetworkPower(const NetworkConfiguration& config,
                                 const Topology& topology,
                                 const DevicePowers& devices = {},
                                 const std::vector<bool>& powered = {});

// Traffic-independent part of a node's draw: optical switch plus its share of
// the EDFAs on incident links.
double FixedNodePower(int node, const Topology& topology,
                      const DevicePowers& devices = {});

// Draw of node i with every C_ij and W_mn at its upper bound; used as the
// grid big-M.
double MaxNodePower(int node, const Topology& topology,
                    const DevicePowers& devices = {});

// Upper bound on lightpaths leaving (or entering) node i: the wavelength
// capacity of its incident fibers.
int MaxLightpathsAt(int node, const Topology& topology);

}  // namespace gridshade

#endif  // GRIDSHADE_POWER_H_
