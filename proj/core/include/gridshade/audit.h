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

#ifndef GRIDSHADE_AUDIT_H_
#define GRIDSHADE_AUDIT_H_

#include <span>
#include <string>
#include <vector>

#include "gridshade/milp.h"

namespace gridshade {

struct AuditReport {
  std::vector<std::string> issues;
  // Largest |RE + BR + BT - node power| over nodes, in watts.
  double max_balance_error_w = 0.0;
  // |sum of all sources - network power|, in watts.
  double network_error_w = 0.0;

  bool ok() const { return issues.empty(); }
};

// Full constraint check plus the power audit trail: every node's sources
// add up to the power of the configuration under the device model, and the
// network total matches ComputeNetworkPower.
AuditReport AuditSolution(const MilpInstance& instance,
                          std::span<const double> values, double tol = 1e-6);

}  // namespace gridshade

#endif  // GRIDSHADE_AUDIT_H_
