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

#include "gridshade/milp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "gridshade/errors.h"

namespace gridshade {

Weights BlockingMinWeights() { return Weights{1.0, 1.0, 1.0, 1e6}; }
Weights Weso1Weights() { return Weights{1.0, 10.0, 100.0, 1e6}; }
Weights Weso2Weights() { return Weights{6.0, 8.0, 20.0, 1e6}; }
Weights Weso3Weights() { return Weights{5.0, 15.0, 25.0, 1e6}; }

std::string_view TagLabel(ConstraintTag tag) {
  switch (tag) {
    case ConstraintTag::kIpFlowConservation:
      return "ip_flow";
    case ConstraintTag::kVirtualLinkCapacity:
      return "virtual_link_capacity";
    case ConstraintTag::kOpticalFlowConservation:
      return "optical_flow";
    case ConstraintTag::kLinkWavelengthTotal:
      return "wavelength_total";
    case ConstraintTag::kFiberCapacity:
      return "fiber_capacity";
    case ConstraintTag::kRenewableCap:
      return "renewable_cap";
    case ConstraintTag::kBatteryCap:
      return "battery_cap";
    case ConstraintTag::kGridCap:
      return "grid_cap";
    case ConstraintTag::kPowerBalance:
      return "power_balance";
    case ConstraintTag::kVariableBounds:
      return "bounds";
    case ConstraintTag::kIntegrality:
      return "integrality";
  }
  return "?";
}

EnergySplit SplitPower(double power_w, const SourceCaps& caps_kw,
                       const Weights& weights) {
  struct Source {
    double weight;
    int order;
    double cap_w;
    double* slot;
  };
  EnergySplit split;
  std::array<Source, 3> sources{{
      {weights.alpha, 0, caps_kw.re_max_kw * 1000.0, &split.re_w},
      {weights.beta, 1, caps_kw.br_max_kw * 1000.0, &split.br_w},
      {weights.gamma, 2, caps_kw.bt_max_kw * 1000.0, &split.bt_w},
  }};
  std::sort(sources.begin(), sources.end(), [](const Source& a, const Source& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.order < b.order;
  });
  double remaining = std::max(0.0, power_w);
  for (Source& source : sources) {
    const double take = std::min(remaining, source.cap_w);
    *source.slot = take;
    remaining -= take;
  }
  if (remaining > 1e-9) {
    split.feasible = false;
    // Park the shortfall on the last source so the balance still adds up.
    *sources.back().slot += remaining;
  }
  return split;
}

int MilpInstance::CountConstraints(ConstraintTag tag) const {
  return static_cast<int>(std::count_if(
      constraints_.begin(), constraints_.end(),
      [tag](const Constraint& c) { return c.tag == tag; }));
}

std::string MilpInstance::VariableName(int var) const {
  std::ostringstream os;
  auto pair_of = [this](int p, int& i, int& j) {
    i = p / (num_nodes_ - 1);
    const int r = p % (num_nodes_ - 1);
    j = r < i ? r : r + 1;
  };
  int i = 0;
  int j = 0;
  if (var < lightpath_offset_) {
    const int k = (var - flow_offset_) / num_pairs_;
    pair_of((var - flow_offset_) % num_pairs_, i, j);
    os << "lam_" << demands_[static_cast<std::size_t>(k)].s << "_"
       << demands_[static_cast<std::size_t>(k)].d << "_" << i << "_" << j;
  } else if (var < routing_offset_) {
    pair_of(var - lightpath_offset_, i, j);
    os << "C_" << i << "_" << j;
  } else if (var < link_offset_) {
    const int p = (var - routing_offset_) / num_arcs_;
    const Arc a = topology_->arc((var - routing_offset_) % num_arcs_);
    pair_of(p, i, j);
    os << "Wr_" << i << "_" << j << "_" << a.from << "_" << a.to;
  } else if (var < blocking_offset_) {
    const Arc a = topology_->arc(var - link_offset_);
    os << "W_" << a.from << "_" << a.to;
  } else if (var < energy_offset_) {
    const Demand& d = demands_[static_cast<std::size_t>(var - blocking_offset_)];
    os << "bl_" << d.s << "_" << d.d;
  } else {
    static constexpr const char* kSource[] = {"RE_", "BR_", "BT_"};
    const int offset = var - energy_offset_;
    os << kSource[offset % 3] << offset / 3;
  }
  return os.str();
}

double MilpInstance::NodePowerUnder(int node,
                                    std::span<const double> values) const {
  const Constraint& row = constraints_[static_cast<std::size_t>(
      power_balance_row(node))];
  double watts = powered(node) ? fixed_power_w(node) : 0.0;
  for (const Term& t : row.terms) {
    if (t.var >= energy_offset_) continue;
    watts += t.coef * values[static_cast<std::size_t>(t.var)];
  }
  return watts;
}

MilpInstance BuildInstance(const Topology& topology,
                           const TrafficMatrix& demands,
                           std::span<const SourceCaps> caps_kw,
                           const Weights& weights,
                           const DevicePowers& devices) {
  const int n = topology.num_nodes();
  if (n < 2) throw InputError("instance needs at least two nodes");
  if (static_cast<int>(caps_kw.size()) != n) {
    throw InputError("source caps must be given for every node");
  }

  MilpInstance inst;
  inst.topology_ = std::make_shared<const Topology>(topology);
  inst.devices_ = devices;
  inst.weights_ = weights;
  inst.caps_kw_.assign(caps_kw.begin(), caps_kw.end());
  inst.num_nodes_ = n;
  inst.num_arcs_ = topology.num_arcs();
  inst.num_pairs_ = n * (n - 1);

  for (const auto& [pair, gbps] : demands.demands) {
    if (pair.s < 0 || pair.s >= n || pair.d < 0 || pair.d >= n) {
      throw InputError("demand (" + std::to_string(pair.s) + "," +
                       std::to_string(pair.d) + ") references unknown node");
    }
    if (pair.s == pair.d) throw InputError("self-demand in traffic matrix");
    if (gbps > 0.0) inst.demands_.push_back(Demand{pair.s, pair.d, gbps});
  }

  for (int i = 0; i < n; ++i) {
    const SourceCaps& c = caps_kw[static_cast<std::size_t>(i)];
    const double fixed = FixedNodePower(i, topology, devices);
    inst.fixed_power_w_.push_back(fixed);
    const double available = (c.re_max_kw + c.bt_max_kw + c.br_max_kw) * 1000.0;
    inst.powered_.push_back(available >= fixed - 1e-9);
  }
  auto up = [&inst](int node) { return inst.powered(node); };
  auto arc_up = [&](int a) {
    const Arc arc = topology.arc(a);
    return up(arc.from) && up(arc.to);
  };

  const int num_demands = inst.num_demands();
  const int num_arcs = inst.num_arcs_;
  inst.flow_offset_ = 0;
  inst.lightpath_offset_ = num_demands * inst.num_pairs_;
  inst.routing_offset_ = inst.lightpath_offset_ + inst.num_pairs_;
  inst.link_offset_ = inst.routing_offset_ + inst.num_pairs_ * num_arcs;
  inst.blocking_offset_ = inst.link_offset_ + num_arcs;
  inst.energy_offset_ = inst.blocking_offset_ + num_demands;
  inst.variables_.resize(static_cast<std::size_t>(inst.energy_offset_ + 3 * n));
  auto var = [&inst](int index) -> Variable& {
    return inst.variables_[static_cast<std::size_t>(index)];
  };

  for (int k = 0; k < num_demands; ++k) {
    const double volume = inst.demands_[static_cast<std::size_t>(k)].gbps;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        var(inst.flow(k, i, j)) = Variable{VarType::kContinuous, 0.0,
                                           up(i) && up(j) ? volume : 0.0, 0.0};
      }
    }
    var(inst.blocking(k)) = Variable{VarType::kBinary, 0.0, 1.0, weights.delta};
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int bound =
          up(i) && up(j)
              ? std::min(MaxLightpathsAt(i, topology), MaxLightpathsAt(j, topology))
              : 0;
      var(inst.lightpath(i, j)) =
          Variable{VarType::kInteger, 0.0, static_cast<double>(bound), 0.0};
      for (int a = 0; a < num_arcs; ++a) {
        const double cap = up(i) && up(j) && arc_up(a)
                               ? topology.arc_capacity(topology.arc(a).link)
                               : 0.0;
        var(inst.routing(i, j, a)) = Variable{VarType::kInteger, 0.0, cap, 0.0};
      }
    }
  }
  for (int a = 0; a < num_arcs; ++a) {
    const double cap =
        arc_up(a) ? topology.arc_capacity(topology.arc(a).link) : 0.0;
    var(inst.link_wavelengths(a)) = Variable{VarType::kInteger, 0.0, cap, 0.0};
  }
  for (int i = 0; i < n; ++i) {
    const SourceCaps& c = caps_kw[static_cast<std::size_t>(i)];
    const bool on = up(i);
    var(inst.renewable(i)) = Variable{VarType::kContinuous, 0.0,
                                      on ? c.re_max_kw * 1000.0 : 0.0,
                                      weights.alpha};
    var(inst.grid(i)) = Variable{VarType::kContinuous, 0.0,
                                 on ? c.br_max_kw * 1000.0 : 0.0, weights.beta};
    var(inst.battery(i)) = Variable{VarType::kContinuous, 0.0,
                                    on ? c.bt_max_kw * 1000.0 : 0.0,
                                    weights.gamma};
  }

  auto& rows = inst.constraints_;
  // IP-layer flow conservation per demand and node.
  for (int k = 0; k < num_demands; ++k) {
    const Demand& dem = inst.demands_[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) {
      Constraint row{ConstraintTag::kIpFlowConservation, {}, RowSense::kEqual, 0.0};
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        row.terms.push_back({inst.flow(k, i, j), 1.0});
        row.terms.push_back({inst.flow(k, j, i), -1.0});
      }
      if (i == dem.s) {
        row.terms.push_back({inst.blocking(k), dem.gbps});
        row.rhs = dem.gbps;
      } else if (i == dem.d) {
        row.terms.push_back({inst.blocking(k), -dem.gbps});
        row.rhs = -dem.gbps;
      }
      rows.push_back(std::move(row));
    }
  }
  // Virtual link capacity.
  const double b = topology.wavelength_capacity_gbps;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Constraint row{ConstraintTag::kVirtualLinkCapacity, {},
                     RowSense::kLessEqual, 0.0};
      for (int k = 0; k < num_demands; ++k) {
        row.terms.push_back({inst.flow(k, i, j), 1.0});
      }
      row.terms.push_back({inst.lightpath(i, j), -b});
      rows.push_back(std::move(row));
    }
  }
  // Optical-layer conservation of each virtual link's wavelengths.
  std::vector<std::vector<int>> out_arcs(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> in_arcs(static_cast<std::size_t>(n));
  for (int a = 0; a < num_arcs; ++a) {
    const Arc arc = topology.arc(a);
    out_arcs[static_cast<std::size_t>(arc.from)].push_back(a);
    in_arcs[static_cast<std::size_t>(arc.to)].push_back(a);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int m = 0; m < n; ++m) {
        Constraint row{ConstraintTag::kOpticalFlowConservation, {},
                       RowSense::kEqual, 0.0};
        for (int a : out_arcs[static_cast<std::size_t>(m)]) {
          row.terms.push_back({inst.routing(i, j, a), 1.0});
        }
        for (int a : in_arcs[static_cast<std::size_t>(m)]) {
          row.terms.push_back({inst.routing(i, j, a), -1.0});
        }
        if (m == i) row.terms.push_back({inst.lightpath(i, j), -1.0});
        if (m == j) row.terms.push_back({inst.lightpath(i, j), 1.0});
        rows.push_back(std::move(row));
      }
    }
  }
  // Total wavelengths per arc, fiber capacity.
  for (int a = 0; a < num_arcs; ++a) {
    Constraint row{ConstraintTag::kLinkWavelengthTotal, {}, RowSense::kEqual, 0.0};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) row.terms.push_back({inst.routing(i, j, a), 1.0});
      }
    }
    row.terms.push_back({inst.link_wavelengths(a), -1.0});
    rows.push_back(std::move(row));
  }
  for (int a = 0; a < num_arcs; ++a) {
    rows.push_back(Constraint{
        ConstraintTag::kFiberCapacity,
        {{inst.link_wavelengths(a), 1.0}},
        RowSense::kLessEqual,
        static_cast<double>(topology.arc_capacity(topology.arc(a).link))});
  }
  // Source caps: renewable, battery, grid.
  for (int i = 0; i < n; ++i) {
    const SourceCaps& c = caps_kw[static_cast<std::size_t>(i)];
    rows.push_back(Constraint{ConstraintTag::kRenewableCap,
                              {{inst.renewable(i), 1.0}},
                              RowSense::kLessEqual,
                              c.re_max_kw * 1000.0});
    rows.push_back(Constraint{ConstraintTag::kBatteryCap,
                              {{inst.battery(i), 1.0}},
                              RowSense::kLessEqual,
                              c.bt_max_kw * 1000.0});
    rows.push_back(Constraint{ConstraintTag::kGridCap,
                              {{inst.grid(i), 1.0}},
                              RowSense::kLessEqual,
                              c.br_max_kw * 1000.0});
  }
  // Node power balance: equipment draw == RE + BR + BT.
  inst.power_row_offset_ = static_cast<int>(rows.size());
  for (int i = 0; i < n; ++i) {
    Constraint row{ConstraintTag::kPowerBalance, {}, RowSense::kEqual,
                   up(i) ? -inst.fixed_power_w(i) : 0.0};
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      row.terms.push_back({inst.lightpath(i, j), 0.5 * devices.router_port_w});
      row.terms.push_back({inst.lightpath(j, i), 0.5 * devices.router_port_w});
    }
    for (int k : topology.incident_links(i)) {
      const double per_wavelength =
          0.5 * devices.transponder_w +
          0.5 * devices.regenerator_w *
              topology.links[static_cast<std::size_t>(k)].regenerators;
      row.terms.push_back({inst.link_wavelengths(2 * k), per_wavelength});
      row.terms.push_back({inst.link_wavelengths(2 * k + 1), per_wavelength});
    }
    row.terms.push_back({inst.renewable(i), -1.0});
    row.terms.push_back({inst.grid(i), -1.0});
    row.terms.push_back({inst.battery(i), -1.0});
    rows.push_back(std::move(row));
  }
  return inst;
}

double ObjectiveValue(const MilpInstance& instance,
                      std::span<const double> values) {
  if (static_cast<int>(values.size()) != instance.num_variables()) {
    throw std::invalid_argument("solution does not assign every variable");
  }
  const Weights& w = instance.weights();
  double power_cost = 0.0;
  for (int i = 0; i < instance.topology().num_nodes(); ++i) {
    power_cost += w.alpha * values[static_cast<std::size_t>(instance.renewable(i))] +
                  w.beta * values[static_cast<std::size_t>(instance.grid(i))] +
                  w.gamma * values[static_cast<std::size_t>(instance.battery(i))];
  }
  double blocked = 0.0;
  for (int k = 0; k < instance.num_demands(); ++k) {
    blocked += values[static_cast<std::size_t>(instance.blocking(k))];
  }
  return power_cost + w.delta * blocked;
}

std::vector<Violation> CheckFeasibility(const MilpInstance& instance,
                                        std::span<const double> values,
                                        double tol) {
  if (static_cast<int>(values.size()) != instance.num_variables()) {
    throw std::invalid_argument("solution does not assign every variable");
  }
  std::vector<Violation> found;
  for (int v = 0; v < instance.num_variables(); ++v) {
    const Variable& var = instance.variables()[static_cast<std::size_t>(v)];
    const double x = values[static_cast<std::size_t>(v)];
    if (!std::isfinite(x) || x < var.lower - tol || x > var.upper + tol) {
      std::ostringstream os;
      os << instance.VariableName(v) << " = " << x << " outside [" << var.lower
         << ", " << var.upper << "]";
      const double amount = std::isfinite(x)
                                ? std::max(var.lower - x, x - var.upper)
                                : std::numeric_limits<double>::infinity();
      found.push_back({ConstraintTag::kVariableBounds, v, amount, os.str()});
    }
    if (var.type != VarType::kContinuous &&
        std::abs(x - std::round(x)) > tol) {
      found.push_back({ConstraintTag::kIntegrality, v,
                       std::abs(x - std::round(x)),
                       instance.VariableName(v) + " is not integral"});
    }
  }
  for (int r = 0; r < instance.num_constraints(); ++r) {
    const Constraint& row = instance.constraints()[static_cast<std::size_t>(r)];
    double lhs = 0.0;
    for (const Term& t : row.terms) {
      lhs += t.coef * values[static_cast<std::size_t>(t.var)];
    }
    double excess = 0.0;
    switch (row.sense) {
      case RowSense::kLessEqual:
        excess = lhs - row.rhs;
        break;
      case RowSense::kGreaterEqual:
        excess = row.rhs - lhs;
        break;
      case RowSense::kEqual:
        excess = std::abs(lhs - row.rhs);
        break;
    }
    if (excess > tol) {
      std::ostringstream os;
      os << TagLabel(row.tag) << " row " << r << ": lhs " << lhs
         << (row.sense == RowSense::kEqual
                 ? " != "
                 : (row.sense == RowSense::kLessEqual ? " > " : " < "))
         << row.rhs;
      found.push_back({row.tag, r, excess, os.str()});
    }
  }
  return found;
}

NetworkConfiguration ExtractConfiguration(const MilpInstance& instance,
                                          std::span<const double> values) {
  const Topology& t = instance.topology();
  NetworkConfiguration config(t);
  auto rounded = [&values](int v) {
    return static_cast<int>(std::lround(values[static_cast<std::size_t>(v)]));
  };
  for (int i = 0; i < t.num_nodes(); ++i) {
    for (int j = 0; j < t.num_nodes(); ++j) {
      if (i == j) continue;
      config.lightpaths(i, j) = rounded(instance.lightpath(i, j));
      for (int a = 0; a < t.num_arcs(); ++a) {
        config.routed(i, j, a) = rounded(instance.routing(i, j, a));
      }
    }
  }
  for (int a = 0; a < t.num_arcs(); ++a) {
    config.link_wavelengths(a) = rounded(instance.link_wavelengths(a));
  }
  return config;
}

void StoreConfiguration(const MilpInstance& instance,
                        const NetworkConfiguration& config,
                        std::span<double> values) {
  const Topology& t = instance.topology();
  for (int i = 0; i < t.num_nodes(); ++i) {
    for (int j = 0; j < t.num_nodes(); ++j) {
      if (i == j) continue;
      values[static_cast<std::size_t>(instance.lightpath(i, j))] =
          config.lightpaths(i, j);
      for (int a = 0; a < t.num_arcs(); ++a) {
        values[static_cast<std::size_t>(instance.routing(i, j, a))] =
            config.routed(i, j, a);
      }
    }
  }
  for (int a = 0; a < t.num_arcs(); ++a) {
    values[static_cast<std::size_t>(instance.link_wavelengths(a))] =
        config.link_wavelengths(a);
  }
}

bool StoreEnergySplit(const MilpInstance& instance, std::span<double> values) {
  bool ok = true;
  for (int i = 0; i < instance.topology().num_nodes(); ++i) {
    const double watts = instance.NodePowerUnder(i, values);
    SourceCaps caps = instance.caps_kw()[static_cast<std::size_t>(i)];
    if (!instance.powered(i)) caps = SourceCaps{};
    const EnergySplit split = SplitPower(watts, caps, instance.weights());
    ok = ok && split.feasible;
    values[static_cast<std::size_t>(instance.renewable(i))] = split.re_w;
    values[static_cast<std::size_t>(instance.grid(i))] = split.br_w;
    values[static_cast<std::size_t>(instance.battery(i))] = split.bt_w;
  }
  return ok;
}

void WriteLpFormat(const MilpInstance& instance, std::ostream& out) {
  auto write_terms = [&](const std::vector<Term>& terms) {
    bool first = true;
    for (const Term& t : terms) {
      if (t.coef == 0.0) continue;
      out << (t.coef < 0 ? " - " : (first ? " " : " + "));
      const double mag = std::abs(t.coef);
      if (mag != 1.0) out << mag << " ";
      out << instance.VariableName(t.var);
      first = false;
    }
    if (first) out << " 0";
  };
  out << "\\ routing and energy-source model, one time slot\n";
  out << "Minimize\n obj:";
  std::vector<Term> objective;
  for (int v = 0; v < instance.num_variables(); ++v) {
    const double c = instance.variables()[static_cast<std::size_t>(v)].cost;
    if (c != 0.0) objective.push_back({v, c});
  }
  write_terms(objective);
  out << "\nSubject To\n";
  for (int r = 0; r < instance.num_constraints(); ++r) {
    const Constraint& row = instance.constraints()[static_cast<std::size_t>(r)];
    out << " " << TagLabel(row.tag) << "_r" << r << ":";
    write_terms(row.terms);
    switch (row.sense) {
      case RowSense::kLessEqual:
        out << " <= ";
        break;
      case RowSense::kGreaterEqual:
        out << " >= ";
        break;
      case RowSense::kEqual:
        out << " = ";
        break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < instance.num_variables(); ++v) {
    const Variable& var = instance.variables()[static_cast<std::size_t>(v)];
    out << " " << var.lower << " <= " << instance.VariableName(v)
        << " <= " << var.upper << "\n";
  }
  out << "General\n";
  for (int v = 0; v < instance.num_variables(); ++v) {
    if (instance.variables()[static_cast<std::size_t>(v)].type ==
        VarType::kInteger) {
      out << " " << instance.VariableName(v) << "\n";
    }
  }
  out << "Binary\n";
  for (int v = 0; v < instance.num_variables(); ++v) {
    if (instance.variables()[static_cast<std::size_t>(v)].type ==
        VarType::kBinary) {
      out << " " << instance.VariableName(v) << "\n";
    }
  }
  out << "End\n";
}

}  // namespace gridshade
