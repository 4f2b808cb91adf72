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

#include "gridshade/report.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "gridshade/errors.h"
#include "gridshade/validation.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

#ifndef GRIDSHADE_VERSION
#define GRIDSHADE_VERSION "0.0.0"
#endif

namespace gridshade {
namespace {

using Index = std::size_t;

// Fixed six decimals; values that would print as -0.000000 print as zero.
std::string Fixed(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

const char* ToolVersion() { return GRIDSHADE_VERSION; }

void WritePowerCsv(const DayResult& result, std::ostream& out) {
  out << kPowerCsvHeader << "\n";
  for (const SlotResult& r : result.slots) {
    const SlotMetrics& m = r.metrics;
    for (Index i = 0; i < m.re_kw.size(); ++i) {
      out << Fixed(r.start_hour) << "," << i << "," << Fixed(m.re_kw[i]) << ","
          << Fixed(m.br_kw[i]) << "," << Fixed(m.bt_kw[i]) << ","
          << Fixed(m.battery_residual_kwh[i]) << "\n";
    }
  }
}

void WriteMetricsCsv(const DayResult& result, std::ostream& out) {
  out << kMetricsCsvHeader << "\n";
  for (const SlotResult& r : result.slots) {
    const SlotMetrics& m = r.metrics;
    out << Fixed(r.start_hour) << "," << m.blocked_count << ","
        << Fixed(m.blocking_prob_volume) << "," << Fixed(m.blocking_prob_count)
        << "," << Fixed(m.virtual_hops_weighted) << "," << m.lightpath_count
        << "\n";
  }
}

void WritePowerCsv(const DayResult& result, const std::string& path) {
  std::ofstream out = OpenForWrite(path);
  WritePowerCsv(result, out);
  if (!out) throw InputError("write failed: " + path);
}

void WriteMetricsCsv(const DayResult& result, const std::string& path) {
  std::ofstream out = OpenForWrite(path);
  WriteMetricsCsv(result, out);
  if (!out) throw InputError("write failed: " + path);
}

std::string Summarize(const DayResult& result) {
  double offered = 0.0;
  double blocked = 0.0;
  int demands = 0;
  int blocked_count = 0;
  double peak_kw = 0.0;
  Index peak_node = 0;
  double peak_hour = 0.0;
  for (const SlotResult& r : result.slots) {
    const SlotMetrics& m = r.metrics;
    offered += m.offered_gbps;
    blocked += m.blocked_gbps;
    demands += m.demand_count;
    blocked_count += m.blocked_count;
    for (Index i = 0; i < m.re_kw.size(); ++i) {
      const double kw = m.re_kw[i] + m.br_kw[i] + m.bt_kw[i];
      if (kw > peak_kw) {
        peak_kw = kw;
        peak_node = i;
        peak_hour = r.start_hour;
      }
    }
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "scenario " << (result.scenario_name.empty() ? "(unnamed)" : result.scenario_name)
     << ": " << SolverModeName(result.mode) << " solver, " << result.slots.size()
     << " slots of " << result.slot_hours << " h\n";
  os << "day volume blocking " << (offered > 0.0 ? blocked / offered : 0.0)
     << "\n";
  os << "day count blocking "
     << (demands > 0 ? static_cast<double>(blocked_count) / demands : 0.0)
     << "\n";
  os << "peak node power " << peak_kw << " kW at node " << peak_node
     << " (slot starting " << peak_hour << " h)\n";
  os << "node  battery_used_kwh  final_residual_kwh\n";
  for (Index i = 0; i < result.final_residual_kwh.size(); ++i) {
    os << std::setw(4) << i << "  " << std::setw(16)
       << result.initial_residual_kwh[i] - result.final_residual_kwh[i] << "  "
       << std::setw(18) << result.final_residual_kwh[i] << "\n";
  }
  return os.str();
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) {
    os << std::setw(2) << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string Sha256File(const std::string& path) {
  return Sha256Hex(ReadFile(path));
}

nlohmann::json BuildManifest(const ManifestInputs& inputs,
                             const std::string& out_dir,
                             const DayResult& result) {
  nlohmann::json m;
  m["tool"] = "gridshade";
  m["version"] = ToolVersion();
  m["topology"] = {{"path", inputs.topology_path},
                   {"sha256", Sha256File(inputs.topology_path)}};
  m["scenario"] = {{"path", inputs.scenario_path},
                   {"sha256", Sha256File(inputs.scenario_path)}};
  m["solver_mode"] = inputs.solver_mode;
  m["forced"] = inputs.forced;
  m["slots"] = result.slots.size();
  m["slot_hours"] = result.slot_hours;
  nlohmann::json statuses = nlohmann::json::array();
  for (const SlotResult& r : result.slots) statuses.push_back(r.solver_status);
  m["slot_status"] = statuses;
  nlohmann::json outputs = nlohmann::json::object();
  for (const char* name : {"power.csv", "metrics.csv", "summary.txt"}) {
    outputs[name] = Sha256File((std::filesystem::path(out_dir) / name).string());
  }
  m["outputs"] = outputs;
  m["timing_file"] = "timing.json";
  return m;
}

nlohmann::json BuildTiming(const DayResult& result) {
  nlohmann::json t = nlohmann::json::array();
  for (const SlotResult& r : result.slots) {
    t.push_back({{"slot_start_hour", r.start_hour},
                 {"seconds", r.solve_seconds},
                 {"bnb_nodes", r.bnb_nodes}});
  }
  return nlohmann::json{{"slots", t}};
}

namespace {

void ConfigureLogging() {
  std::shared_ptr<spdlog::logger> logger = spdlog::get("gridshade");
  if (!logger) {
    logger = spdlog::stderr_color_mt("gridshade");
    spdlog::set_default_logger(logger);
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("GRIDSHADE_LOG")) {
    level = spdlog::level::from_str(env);
  }
  spdlog::set_level(level);
}

int SeedCheck(std::ostream& out) {
  bool ok = true;
  const std::vector<std::pair<std::string, int>> families = {
      {"two-node", 10}, {"triangle-grid-out", 10}, {"mixed", 10}};
  for (const auto& [name, count] : families) {
    InstanceFamily f;
    f.generator = name;
    f.seed = 20260101;
    const BatteryReport r = OracleBattery(f, count);
    out << FormatBatteryReport(r);
    ok = ok && r.failed() == 0 && r.audit.failures == 0;
  }
  InstanceFamily f;
  f.generator = "two-node";
  f.seed = 20260101;
  BatteryOptions corrupt;
  corrupt.corrupt_incumbent = true;
  const BatteryReport negative = OracleBattery(f, 3, corrupt);
  const bool caught = negative.failed() == static_cast<int>(negative.cases.size());
  out << "negative control (corrupted lightpath count): "
      << (caught ? "detected" : "MISSED") << "\n";
  ok = ok && caught;
  out << (ok ? "seed-check passed" : "seed-check FAILED") << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Energy-source-aware routing under node blackout"};
  std::string topology_path;
  std::string scenario_path;
  std::string out_dir = "results";
  std::string solver;
  bool force = false;
  bool seed_check = false;
  app.add_option("--topology", topology_path, "topology JSON file");
  app.add_option("--scenario", scenario_path, "scenario JSON file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--solver", solver, "exact or heuristic (overrides scenario)")
      ->check(CLI::IsMember({"exact", "heuristic"}));
  app.add_flag("--force", force, "run the exact solver beyond its size budget");
  app.add_flag("--seed-check", seed_check,
               "run the oracle-equivalence self-test and exit");
  app.set_version_flag("--version", ToolVersion());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  ConfigureLogging();

  try {
    if (seed_check) return SeedCheck(out);
    if (topology_path.empty() || scenario_path.empty()) {
      err << "error: --topology and --scenario are required\n";
      return 1;
    }
    const Topology topology = LoadTopologyFile(topology_path);
    const Scenario scenario = LoadScenarioFile(scenario_path);
    SimOptions options;
    if (!solver.empty()) options.mode = ParseSolverMode(solver);
    options.force = force;
    const DayResult day = RunDay(topology, scenario, options);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw InputError("cannot create " + out_dir + ": " + ec.message());
    const std::filesystem::path dir(out_dir);
    WritePowerCsv(day, (dir / "power.csv").string());
    WriteMetricsCsv(day, (dir / "metrics.csv").string());
    const std::string summary = Summarize(day);
    {
      std::ofstream s = OpenForWrite((dir / "summary.txt").string());
      s << summary;
    }
    ManifestInputs inputs{topology_path, scenario_path,
                          SolverModeName(day.mode), force};
    {
      std::ofstream m = OpenForWrite((dir / "manifest.json").string());
      m << BuildManifest(inputs, out_dir, day).dump(2) << "\n";
    }
    {
      std::ofstream t = OpenForWrite((dir / "timing.json").string());
      t << BuildTiming(day).dump(2) << "\n";
    }
    out << summary;
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetExceededError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const FeasibilityError& e) {
    err << "solver failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace gridshade
