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

#include "gridshade/energy.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gridshade/errors.h"

namespace gridshade {

double RenewableCapKw(const SourceEquipment& eq, double slot_start_hour,
                      double slot_hours) {
  if (!(eq.solar_peak_kw > 0.0) || !(slot_hours > 0.0)) return 0.0;
  const double day = eq.sunset_hour - eq.sunrise_hour;
  if (!(day > 0.0)) return 0.0;
  const double lo = std::max(slot_start_hour, eq.sunrise_hour);
  const double hi = std::min(slot_start_hour + slot_hours, eq.sunset_hour);
  if (!(hi > lo)) return 0.0;
  // Integral of peak * sin(pi (h - sunrise) / day) over [lo, hi].
  const double k = std::numbers::pi / day;
  const double energy_kwh = eq.solar_peak_kw / k *
                            (std::cos(k * (lo - eq.sunrise_hour)) -
                             std::cos(k * (hi - eq.sunrise_hour)));
  return std::clamp(energy_kwh / slot_hours, 0.0, eq.solar_peak_kw);
}

bool GridAvailable(std::span<const HourWindow> outages, double slot_start_hour,
                   double slot_hours) {
  const double end = slot_start_hour + slot_hours;
  return std::none_of(outages.begin(), outages.end(), [&](const HourWindow& w) {
    return w.Intersects(slot_start_hour, end);
  });
}

double BatteryStep(double residual_kwh, double withdrawn_kw,
                   double slot_hours) {
  if (withdrawn_kw < 0.0) {
    throw FeasibilityError("negative battery withdrawal");
  }
  const double energy = withdrawn_kw * slot_hours;
  if (energy > residual_kwh + 1e-9) {
    std::ostringstream os;
    os << "battery over-withdrawal: " << energy << " kWh requested, "
       << residual_kwh << " kWh left";
    throw FeasibilityError(os.str());
  }
  return std::max(0.0, residual_kwh - energy);
}

EnergyState::EnergyState(std::vector<NodeEnergyConfig> configs,
                         std::vector<double> grid_big_m_kw, double slot_hours)
    : configs_(std::move(configs)),
      grid_big_m_kw_(std::move(grid_big_m_kw)),
      slot_hours_(slot_hours) {
  if (grid_big_m_kw_.size() != configs_.size()) {
    throw std::invalid_argument("one grid cap per node required");
  }
  if (!(slot_hours_ > 0.0)) throw InputError("slot_hours must be positive");
  residual_kwh_.reserve(configs_.size());
  for (const NodeEnergyConfig& c : configs_) {
    residual_kwh_.push_back(c.equipment.battery_kwh);
  }
}

bool EnergyState::GridAvailableAt(int node, int slot) const {
  return GridAvailable(config(node).grid_outages, SlotStartHour(slot),
                       slot_hours_);
}

SourceCaps EnergyState::CapsAt(int node, int slot) const {
  SourceCaps caps;
  caps.re_max_kw =
      RenewableCapKw(config(node).equipment, SlotStartHour(slot), slot_hours_);
  caps.bt_max_kw = residual_kwh(node) / slot_hours_;
  caps.br_max_kw = GridAvailableAt(node, slot)
                       ? grid_big_m_kw_[static_cast<std::size_t>(node)]
                       : 0.0;
  return caps;
}

std::vector<SourceCaps> EnergyState::AllCapsAt(int slot) const {
  std::vector<SourceCaps> caps;
  caps.reserve(configs_.size());
  for (int i = 0; i < num_nodes(); ++i) caps.push_back(CapsAt(i, slot));
  return caps;
}

void EnergyState::Withdraw(int node, double bt_kw) {
  double& residual = residual_kwh_[static_cast<std::size_t>(node)];
  residual = BatteryStep(residual, bt_kw, slot_hours_);
}

}  // namespace gridshade
