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

#ifndef GRIDSHADE_MILP_H_
#define GRIDSHADE_MILP_H_

#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridshade/demand.h"
#include "gridshade/energy.h"
#include "gridshade/linear.h"
#include "gridshade/power.h"
#include "gridshade/topology.h"

namespace gridshade {

// Objective coefficients: alpha on renewable, beta on grid, gamma on battery
// power (per watt), delta per blocked demand.
struct Weights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double delta = 1e6;

  bool operator==(const Weights&) const = default;
};

// Reference weight schemes.
Weights BlockingMinWeights();
Weights Weso1Weights();
Weights Weso2Weights();
Weights Weso3Weights();

enum class VarType { kContinuous, kInteger, kBinary };

enum class ConstraintTag {
  kIpFlowConservation,
  kVirtualLinkCapacity,
  kOpticalFlowConservation,
  kLinkWavelengthTotal,
  kFiberCapacity,
  kRenewableCap,
  kBatteryCap,
  kGridCap,                  // grid availability / big-M
  kPowerBalance,
  kVariableBounds,           // only reported by CheckFeasibility
  kIntegrality,              // only reported by CheckFeasibility
};

// Short snake_case name of the row family, e.g. "power_balance".
std::string_view TagLabel(ConstraintTag tag);

struct Variable {
  VarType type = VarType::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
  double cost = 0.0;
};

struct Constraint {
  ConstraintTag tag = ConstraintTag::kIpFlowConservation;
  std::vector<Term> terms;
  RowSense sense = RowSense::kEqual;
  double rhs = 0.0;
};

struct Demand {
  int s = 0;
  int d = 0;
  double gbps = 0.0;
};

struct MilpSolution {
  std::vector<double> values;
  double objective = 0.0;
};

// Power split of one node across the three sources, in watts.
struct EnergySplit {
  double re_w = 0.0;
  double br_w = 0.0;
  double bt_w = 0.0;
  bool feasible = true;
};

// Covers `power_w` from the cheapest source first (ties resolved renewable,
// grid, battery). This is the optimal split for a single node once routing is
// fixed. feasible is false when the caps cannot cover the power.
EnergySplit SplitPower(double power_w, const SourceCaps& caps_kw,
                       const Weights& weights);

// One time slot of the routing/energy model. Immutable once built.
class MilpInstance {
 public:
  const Topology& topology() const { return *topology_; }
  const DevicePowers& devices() const { return devices_; }
  const Weights& weights() const { return weights_; }
  std::span<const Demand> demands() const { return demands_; }
  int num_demands() const { return static_cast<int>(demands_.size()); }
  const std::vector<SourceCaps>& caps_kw() const { return caps_kw_; }
  // A node whose sources cannot cover its fixed draw is shut down for the
  // slot: all its equipment is off and nothing may touch it.
  bool powered(int node) const { return powered_[static_cast<std::size_t>(node)]; }
  const std::vector<bool>& powered_mask() const { return powered_; }
  double fixed_power_w(int node) const {
    return fixed_power_w_[static_cast<std::size_t>(node)];
  }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int CountConstraints(ConstraintTag tag) const;

  // Variable indices.
  int flow(int demand, int i, int j) const {
    return flow_offset_ + demand * num_pairs_ + PairIndex(i, j);
  }
  int lightpath(int i, int j) const { return lightpath_offset_ + PairIndex(i, j); }
  int routing(int i, int j, int arc) const {
    return routing_offset_ + PairIndex(i, j) * num_arcs_ + arc;
  }
  int link_wavelengths(int arc) const { return link_offset_ + arc; }
  int blocking(int demand) const { return blocking_offset_ + demand; }
  int renewable(int node) const { return energy_offset_ + 3 * node; }
  int grid(int node) const { return energy_offset_ + 3 * node + 1; }
  int battery(int node) const { return energy_offset_ + 3 * node + 2; }

  std::string VariableName(int var) const;

  // Row index of the power balance constraint of `node`.
  int power_balance_row(int node) const {
    return power_row_offset_ + node;
  }

  // Node power (equipment draw including the fixed part) under `values`.
  double NodePowerUnder(int node, std::span<const double> values) const;

 private:
  friend MilpInstance BuildInstance(const Topology&, const TrafficMatrix&,
                                    std::span<const SourceCaps>,
                                    const Weights&, const DevicePowers&);

  int PairIndex(int i, int j) const {
    return i * (num_nodes_ - 1) + (j < i ? j : j - 1);
  }

  std::shared_ptr<const Topology> topology_;
  DevicePowers devices_;
  Weights weights_;
  std::vector<Demand> demands_;
  std::vector<SourceCaps> caps_kw_;
  std::vector<bool> powered_;
  std::vector<double> fixed_power_w_;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;

  int num_nodes_ = 0;
  int num_arcs_ = 0;
  int num_pairs_ = 0;
  int flow_offset_ = 0;
  int lightpath_offset_ = 0;
  int routing_offset_ = 0;
  int link_offset_ = 0;
  int blocking_offset_ = 0;
  int energy_offset_ = 0;
  int power_row_offset_ = 0;
};

// Encodes one slot: every positive demand of `demands` gets a blocking
// variable; caps are per node in kW. Throws InputError for demands on unknown
// nodes or a caps vector of the wrong size.
MilpInstance BuildInstance(const Topology& topology,
                           const TrafficMatrix& demands,
                           std::span<const SourceCaps> caps_kw,
                           const Weights& weights,
                           const DevicePowers& devices = {});

// sum_i (alpha RE_i + beta BR_i + gamma BT_i) + delta sum bl_sd.
double ObjectiveValue(const MilpInstance& instance,
                      std::span<const double> values);

struct Violation {
  ConstraintTag tag = ConstraintTag::kVariableBounds;
  int index = 0;  // row for constraints, variable for bounds/integrality
  double amount = 0.0;
  std::string message;
};

// Empty iff every row, bound and integrality requirement holds within `tol`.
std::vector<Violation> CheckFeasibility(const MilpInstance& instance,
                                        std::span<const double> values,
                                        double tol = 1e-6);

// Rounds the integer part of a solution into a configuration.
NetworkConfiguration ExtractConfiguration(const MilpInstance& instance,
                                          std::span<const double> values);

// Writes C, W^ij_mn and W_mn of `config` into `values`.
void StoreConfiguration(const MilpInstance& instance,
                        const NetworkConfiguration& config,
                        std::span<double> values);

// Recomputes RE/BR/BT of every node from its power under `values` with
// SplitPower. Returns false if some node cannot be covered.
bool StoreEnergySplit(const MilpInstance& instance, std::span<double> values);

// CPLEX-LP style rendering with one comment tag per row.
void WriteLpFormat(const MilpInstance& instance, std::ostream& out);

}  // namespace gridshade

#endif  // GRIDSHADE_MILP_H_
