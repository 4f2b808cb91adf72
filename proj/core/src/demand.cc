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

#include "gridshade/demand.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridshade/errors.h"

namespace gridshade {

double TrafficMatrix::at(int s, int d) const {
  auto it = demands.find(NodePair{s, d});
  return it == demands.end() ? 0.0 : it->second;
}

void TrafficMatrix::set(int s, int d, double gbps) {
  if (s == d) throw InputError("self-demand " + std::to_string(s));
  if (!(gbps >= 0.0)) throw InputError("negative demand volume");
  demands[NodePair{s, d}] = gbps;
}

void DiurnalProfile::Validate() const {
  if (!(slot_hours > 0.0)) throw InputError("slot_hours must be positive");
  if (values.empty()) throw InputError("profile has no values");
  if (std::abs(static_cast<double>(values.size()) * slot_hours - 24.0) > 1e-9) {
    throw InputError("profile length " + std::to_string(values.size()) +
                     " does not cover 24 h with slot_hours " +
                     std::to_string(slot_hours));
  }
  for (double v : values) {
    if (!(v >= 0.0)) throw InputError("profile values must be non-negative");
  }
  if (!(*std::max_element(values.begin(), values.end()) > 0.0)) {
    throw InputError("profile maximum must be positive");
  }
}

DiurnalProfile DefaultProfile() {
  // Synthetic: a night trough, a working-day plateau and an evening peak.
  return DiurnalProfile{
      2.0, {0.62, 0.38, 0.26, 0.34, 0.52, 0.66, 0.72, 0.74, 0.78, 0.84, 0.93,
            1.00}};
}

TrafficMatrix GravityMatrix(std::span<const double> populations,
                            double total_volume_gbps) {
  const int n = static_cast<int>(populations.size());
  if (n < 2) throw InputError("gravity model needs at least 2 nodes");
  if (!(total_volume_gbps > 0.0)) {
    throw InputError("gravity model total volume must be positive");
  }
  double norm = 0.0;
  for (int u = 0; u < n; ++u) {
    if (!(populations[static_cast<std::size_t>(u)] >= 0.0)) {
      throw InputError("populations must be non-negative");
    }
    for (int v = 0; v < n; ++v) {
      if (u != v) {
        norm += populations[static_cast<std::size_t>(u)] *
                populations[static_cast<std::size_t>(v)];
      }
    }
  }
  if (!(norm > 0.0)) {
    throw InputError("gravity model needs at least two populated nodes");
  }
  TrafficMatrix m;
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      if (s == d) continue;
      m.demands[NodePair{s, d}] = total_volume_gbps *
                                  populations[static_cast<std::size_t>(s)] *
                                  populations[static_cast<std::size_t>(d)] /
                                  norm;
    }
  }
  return m;
}

TrafficMatrix DemandAtSlot(const TrafficMatrix& base,
                           const DiurnalProfile& profile, int slot_index) {
  profile.Validate();
  if (slot_index < 0 || slot_index >= profile.num_slots()) {
    throw InputError("slot index " + std::to_string(slot_index) +
                     " out of range");
  }
  const double peak = *std::max_element(profile.values.begin(),
                                        profile.values.end());
  const double value = profile.values[static_cast<std::size_t>(slot_index)];
  TrafficMatrix m = base;
  if (value == peak) return m;
  const double scale = value / peak;
  for (auto& [pair, volume] : m.demands) volume *= scale;
  return m;
}

double TotalOffered(const TrafficMatrix& matrix) {
  double total = 0.0;
  for (const auto& [pair, volume] : matrix.demands) total += volume;
  return total;
}

}  // namespace gridshade
