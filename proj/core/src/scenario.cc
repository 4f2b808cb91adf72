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

#include "gridshade/scenario.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "gridshade/errors.h"

namespace gridshade {

using nlohmann::json;

const char* SolverModeName(SolverMode mode) {
  return mode == SolverMode::kExact ? "exact" : "heuristic";
}

SolverMode ParseSolverMode(std::string_view text) {
  if (text == "exact") return SolverMode::kExact;
  if (text == "heuristic") return SolverMode::kHeuristic;
  throw InputError("unknown solver mode '" + std::string(text) +
                   "' (expected exact or heuristic)");
}

namespace {

[[noreturn]] void SchemaError(const std::string& what) {
  throw InputError("scenario schema error: " + what);
}

double Number(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) SchemaError(where + " is missing '" + key + "'");
  if (!it->is_number()) SchemaError(where + " '" + key + "' is not a number");
  return it->get<double>();
}

int Integer(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) SchemaError(where + " is missing '" + key + "'");
  if (!it->is_number_integer()) {
    SchemaError(where + " '" + key + "' is not an integer");
  }
  return it->get<int>();
}

}  // namespace

Scenario ParseScenario(const json& doc) {
  if (!doc.is_object()) SchemaError("top level must be an object");
  Scenario s;
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) SchemaError("'name' is not a string");
    s.name = it->get<std::string>();
  }

  const auto w = doc.find("weights");
  if (w == doc.end() || !w->is_object()) SchemaError("missing 'weights' object");
  s.weights.alpha = Number(*w, "alpha", "weights");
  s.weights.beta = Number(*w, "beta", "weights");
  s.weights.gamma = Number(*w, "gamma", "weights");
  s.weights.delta = Number(*w, "delta", "weights");

  if (const auto it = doc.find("blackouts"); it != doc.end()) {
    if (!it->is_array()) SchemaError("'blackouts' is not an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string where = "blackout " + std::to_string(i);
      if (!e.is_object()) SchemaError(where + " is not an object");
      s.blackouts.push_back(BlackoutEvent{Integer(e, "node", where),
                                          Number(e, "start_hour", where),
                                          Number(e, "end_hour", where)});
    }
  }

  if (const auto it = doc.find("slot_hours"); it != doc.end()) {
    if (!it->is_number()) SchemaError("'slot_hours' is not a number");
    s.profile.slot_hours = it->get<double>();
  }
  if (const auto it = doc.find("profile"); it != doc.end()) {
    if (!it->is_array()) SchemaError("'profile' is not an array");
    s.profile.values.clear();
    for (const json& v : *it) {
      if (!v.is_number()) SchemaError("'profile' entries must be numbers");
      s.profile.values.push_back(v.get<double>());
    }
  }
  s.profile.Validate();

  if (const auto it = doc.find("busy_hour_total_gbps"); it != doc.end()) {
    if (!it->is_number()) SchemaError("'busy_hour_total_gbps' is not a number");
    s.busy_hour_total_gbps = it->get<double>();
    if (!(s.busy_hour_total_gbps >= 0.0)) {
      SchemaError("'busy_hour_total_gbps' must be non-negative");
    }
  }
  if (const auto it = doc.find("solver"); it != doc.end()) {
    if (!it->is_string()) SchemaError("'solver' is not a string");
    s.solver = ParseSolverMode(it->get<std::string>());
  }
  if (const auto it = doc.find("demands"); it != doc.end()) {
    if (!it->is_array()) SchemaError("'demands' is not an array");
    TrafficMatrix m;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string where = "demand " + std::to_string(i);
      if (!e.is_object()) SchemaError(where + " is not an object");
      const int src = Integer(e, "s", where);
      const int dst = Integer(e, "d", where);
      const double gbps = Number(e, "gbps", where);
      if (src == dst) SchemaError(where + " has s == d");
      if (!(gbps >= 0.0)) SchemaError(where + " has a negative volume");
      if (m.demands.contains(NodePair{src, dst})) {
        SchemaError(where + " repeats pair (" + std::to_string(src) + "," +
                    std::to_string(dst) + ")");
      }
      m.set(src, dst, gbps);
    }
    s.busy_hour_demands = std::move(m);
  }
  return s;
}

Scenario ParseScenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scenario parse failure: ") + e.what());
  }
  return ParseScenario(doc);
}

Scenario LoadScenarioFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return ParseScenario(std::string_view(text));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<std::string> ValidateScenario(const Scenario& s,
                                          const Topology& topology) {
  std::vector<std::string> problems;
  const Weights& w = s.weights;
  for (double v : {w.alpha, w.beta, w.gamma, w.delta}) {
    if (!std::isfinite(v) || v < 0.0) {
      problems.push_back("weights must be finite and non-negative");
      break;
    }
  }
  if (!(w.delta > 0.0)) problems.push_back("blocking weight delta must be positive");
  try {
    s.profile.Validate();
  } catch (const InputError& e) {
    problems.emplace_back(e.what());
  }
  for (std::size_t i = 0; i < s.blackouts.size(); ++i) {
    const BlackoutEvent& e = s.blackouts[i];
    const std::string where = "blackout " + std::to_string(i);
    if (e.node < 0 || e.node >= topology.num_nodes()) {
      problems.push_back(where + " references unknown node " +
                         std::to_string(e.node));
    }
    if (!(e.start_hour < e.end_hour)) {
      problems.push_back(where + " has an empty window");
    }
  }
  if (s.busy_hour_demands.has_value()) {
    for (const auto& [pair, gbps] : s.busy_hour_demands->demands) {
      if (pair.s < 0 || pair.s >= topology.num_nodes() || pair.d < 0 ||
          pair.d >= topology.num_nodes()) {
        problems.push_back("demand (" + std::to_string(pair.s) + "," +
                           std::to_string(pair.d) + ") references an unknown node");
      }
    }
  }
  return problems;
}

json ScenarioToJson(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["weights"] = {{"alpha", s.weights.alpha},
                    {"beta", s.weights.beta},
                    {"gamma", s.weights.gamma},
                    {"delta", s.weights.delta}};
  json events = json::array();
  for (const BlackoutEvent& e : s.blackouts) {
    events.push_back(
        {{"node", e.node}, {"start_hour", e.start_hour}, {"end_hour", e.end_hour}});
  }
  doc["blackouts"] = events;
  doc["slot_hours"] = s.profile.slot_hours;
  doc["profile"] = s.profile.values;
  doc["busy_hour_total_gbps"] = s.busy_hour_total_gbps;
  doc["solver"] = SolverModeName(s.solver);
  if (s.busy_hour_demands.has_value()) {
    json list = json::array();
    for (const auto& [pair, gbps] : s.busy_hour_demands->demands) {
      list.push_back({{"s", pair.s}, {"d", pair.d}, {"gbps", gbps}});
    }
    doc["demands"] = list;
  }
  return doc;
}

TrafficMatrix BusyHourMatrix(const Scenario& s, const Topology& topology) {
  if (s.busy_hour_demands.has_value()) return *s.busy_hour_demands;
  if (s.busy_hour_total_gbps == 0.0) return TrafficMatrix{};
  std::vector<double> populations;
  for (const Node& n : topology.nodes) populations.push_back(n.population);
  return GravityMatrix(populations, s.busy_hour_total_gbps);
}

}  // namespace gridshade
