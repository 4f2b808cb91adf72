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

#ifndef GRIDSHADE_TOPOLOGY_H_
#define GRIDSHADE_TOPOLOGY_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gridshade {

// Energy equipment installed in a node's central office. Outage windows are
// scenario data and live in energy.h.
struct SourceEquipment {
  double battery_kwh = 0.0;
  double solar_peak_kw = 0.0;
  double sunrise_hour = 6.0;
  double sunset_hour = 18.0;

  bool operator==(const SourceEquipment&) const = default;
};

struct Node {
  int id = 0;
  std::string name;
  double population = 0.0;
  bool has_datacenter = false;
  SourceEquipment equipment;

  bool operator==(const Node&) const = default;
};

// Bidirectional physical link. Endpoints are stored in the order given in the
// input document.
struct Link {
  int m = 0;
  int n = 0;
  double length_km = 0.0;
  int fibers = 1;
  int regenerators = 0;

  bool operator==(const Link&) const = default;
};

// One direction of a physical link. Arc 2k runs m->n of link k, arc 2k+1
// runs n->m.
struct Arc {
  int from = 0;
  int to = 0;
  int link = 0;
};

struct Topology {
  std::vector<Node> nodes;
  std::vector<Link> links;
  double span_km = 80.0;
  int wavelengths_per_fiber = 32;
  double wavelength_capacity_gbps = 40.0;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_links() const { return static_cast<int>(links.size()); }
  int num_arcs() const { return 2 * num_links(); }

  Arc arc(int a) const;
  std::vector<Arc> arcs() const;
  // Arcs leaving / entering `node`, in arc index order.
  std::vector<int> out_arcs(int node) const;
  std::vector<int> in_arcs(int node) const;
  // Links with `node` as an endpoint, in link index order.
  std::vector<int> incident_links(int node) const;
  std::optional<int> find_link(int a, int b) const;
  std::optional<int> find_arc(int from, int to) const;

  // Wavelength channels one direction of link `k` can carry (W * F).
  int arc_capacity(int link) const {
    return wavelengths_per_fiber * links[static_cast<std::size_t>(link)].fibers;
  }
  // EDFAs installed along link `k` (ceiling rule, see AmplifierCount).
  int amplifiers(int link) const;

  bool operator==(const Topology&) const = default;
};

// Number of EDFAs on a link of `length_km` with amplifier spacing `span_km`:
// ceil(length/span - 1) + 2, never fewer than 2. Throws std::invalid_argument
// on non-positive arguments.
int AmplifierCount(double length_km, double span_km);

// One human-readable entry per broken invariant; empty when the topology is
// valid.
std::vector<std::string> ValidateTopology(const Topology& topology);

// Parses and validates a topology document. Throws InputError.
Topology ParseTopology(const nlohmann::json& document);
Topology ParseTopology(std::string_view text);
Topology LoadTopologyFile(const std::string& path);

nlohmann::json TopologyToJson(const Topology& topology);

}  // namespace gridshade

#endif  // GRIDSHADE_TOPOLOGY_H_
