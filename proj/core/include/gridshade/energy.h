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

#ifndef GRIDSHADE_ENERGY_H_
#define GRIDSHADE_ENERGY_H_

#include <span>
#include <vector>

#include "gridshade/topology.h"

namespace gridshade {

// Half-open interval of hours [start, end).
struct HourWindow {
  double start = 0.0;
  double end = 0.0;

  bool Intersects(double from, double to) const {
    return start < to && from < end;
  }
};

struct NodeEnergyConfig {
  SourceEquipment equipment;
  std::vector<HourWindow> grid_outages;
};

// Per-slot upper bounds on the three sources at one node, in kW.
struct SourceCaps {
  double re_max_kw = 0.0;
  double bt_max_kw = 0.0;
  double br_max_kw = 0.0;
};

// Mean solar output over [slot_start, slot_start + slot_hours) for a
// half-sine day between sunrise and sunset peaking at solar_peak_kw.
double RenewableCapKw(const SourceEquipment& equipment, double slot_start_hour,
                      double slot_hours);

// False iff [slot_start, slot_start + slot_hours) meets an outage window.
bool GridAvailable(std::span<const HourWindow> outages, double slot_start_hour,
                   double slot_hours);

// Residual after drawing `withdrawn_kw` for `slot_hours`. Throws
// FeasibilityError when the draw exceeds the residual by more than 1e-9 kWh.
double BatteryStep(double residual_kwh, double withdrawn_kw, double slot_hours);

// Battery residuals and source availability of every node for one simulated
// day. Owned by a single run.
class EnergyState {
 public:
  // grid_big_m_kw[i] is the grid cap used while node i has grid power.
  EnergyState(std::vector<NodeEnergyConfig> configs,
              std::vector<double> grid_big_m_kw, double slot_hours);

  int num_nodes() const { return static_cast<int>(configs_.size()); }
  double slot_hours() const { return slot_hours_; }
  double residual_kwh(int node) const {
    return residual_kwh_[static_cast<std::size_t>(node)];
  }
  const std::vector<double>& residuals_kwh() const { return residual_kwh_; }
  const NodeEnergyConfig& config(int node) const {
    return configs_[static_cast<std::size_t>(node)];
  }

  double SlotStartHour(int slot) const { return slot * slot_hours_; }
  bool GridAvailableAt(int node, int slot) const;
  SourceCaps CapsAt(int node, int slot) const;
  std::vector<SourceCaps> AllCapsAt(int slot) const;

  // Applies BatteryStep to `node` for one slot.
  void Withdraw(int node, double bt_kw);

 private:
  std::vector<NodeEnergyConfig> configs_;
  std::vector<double> grid_big_m_kw_;
  std::vector<double> residual_kwh_;
  double slot_hours_;
};

}  // namespace gridshade

#endif  // GRIDSHADE_ENERGY_H_
