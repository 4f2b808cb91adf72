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

#ifndef GRIDSHADE_DEMAND_H_
#define GRIDSHADE_DEMAND_H_

#include <compare>
#include <map>
#include <span>
#include <vector>

namespace gridshade {

// Ordered source/destination pair.
struct NodePair {
  int s = 0;
  int d = 0;
  auto operator<=>(const NodePair&) const = default;
};

// Offered traffic in Gb/s per ordered pair. Self-pairs never appear.
struct TrafficMatrix {
  std::map<NodePair, double> demands;

  double at(int s, int d) const;
  void set(int s, int d, double gbps);
};

// Relative traffic level per slot of one day. values.size() * slot_hours
// must equal 24.
struct DiurnalProfile {
  double slot_hours = 2.0;
  std::vector<double> values;

  int num_slots() const { return static_cast<int>(values.size()); }
  // Throws InputError when the invariants do not hold.
  void Validate() const;
};

// Twelve two-hour slots with the busy hour in 22:00-24:00 and the trough in
// 04:00-06:00.
DiurnalProfile DefaultProfile();

// Gravity model: lambda_sd = total * p_s p_d / sum_{u != v} p_u p_v.
// Every ordered pair with s != d is present, including zero-volume ones.
TrafficMatrix GravityMatrix(std::span<const double> populations,
                            double total_volume_gbps);

// Scales `base` by values[slot] / max(values).
TrafficMatrix DemandAtSlot(const TrafficMatrix& base,
                           const DiurnalProfile& profile, int slot_index);

double TotalOffered(const TrafficMatrix& matrix);

}  // namespace gridshade

#endif  // GRIDSHADE_DEMAND_H_
