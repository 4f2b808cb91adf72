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

#include "gridshade/audit.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "gridshade/power.h"

namespace gridshade {

AuditReport AuditSolution(const MilpInstance& instance,
                          std::span<const double> values, double tol) {
  AuditReport report;
  if (values.size() != static_cast<std::size_t>(instance.num_variables())) {
    report.issues.push_back("solution has the wrong number of values");
    return report;
  }
  for (const Violation& v : CheckFeasibility(instance, values, tol)) {
    report.issues.push_back(v.message);
  }

  const Topology& topo = instance.topology();
  const NetworkConfiguration config = ExtractConfiguration(instance, values);
  const NetworkPower network = ComputeNetworkPower(
      config, topo, instance.devices(), instance.powered_mask());
  double supplied = 0.0;
  for (int i = 0; i < topo.num_nodes(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double sources = values[static_cast<std::size_t>(instance.renewable(i))] +
                           values[static_cast<std::size_t>(instance.grid(i))] +
                           values[static_cast<std::size_t>(instance.battery(i))];
    supplied += sources;
    const double error = std::abs(sources - network.nodes[u].total_w);
    report.max_balance_error_w = std::max(report.max_balance_error_w, error);
    if (error > tol) {
      std::ostringstream os;
      os.precision(12);
      os << "node " << i << " sources " << sources << " W but equipment draws "
         << network.nodes[u].total_w << " W";
      report.issues.push_back(os.str());
    }
  }
  report.network_error_w = std::abs(supplied - network.total_w);
  if (report.network_error_w > tol) {
    std::ostringstream os;
    os.precision(12);
    os << "sources total " << supplied << " W but network power is "
       << network.total_w << " W";
    report.issues.push_back(os.str());
  }
  return report;
}

}  // namespace gridshade
