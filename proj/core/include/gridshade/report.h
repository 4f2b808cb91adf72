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

#ifndef GRIDSHADE_REPORT_H_
#define GRIDSHADE_REPORT_H_

#include <iosfwd>
#include <string>
#include <string_view>

#include "gridshade/sim.h"
#include "json.hpp"

namespace gridshade {

inline constexpr std::string_view kPowerCsvHeader =
    "slot_start_hour,node,re_kw,br_kw,bt_kw,battery_residual_kwh";
inline constexpr std::string_view kMetricsCsvHeader =
    "slot_start_hour,blocked_count,blocking_prob_volume,blocking_prob_count,"
    "virtual_hops_weighted,lightpath_count";

// One row per (slot, node) in that order; reals with 6 decimals.
void WritePowerCsv(const DayResult& result, std::ostream& out);
void WriteMetricsCsv(const DayResult& result, std::ostream& out);
// File variants; throw InputError when the destination is unwritable.
void WritePowerCsv(const DayResult& result, const std::string& path);
void WriteMetricsCsv(const DayResult& result, const std::string& path);

// One-screen summary: day blocking by volume and count, peak node power,
// battery energy used and final residual per node.
std::string Summarize(const DayResult& result);

// Lower-case hex SHA-256 of `bytes`.
std::string Sha256Hex(std::string_view bytes);
// Throws InputError if the file cannot be read.
std::string Sha256File(const std::string& path);

struct ManifestInputs {
  std::string topology_path;
  std::string scenario_path;
  std::string solver_mode;
  bool forced = false;
};

// Deterministic description of a run: inputs with content hashes, tool
// version, solver mode and the hashes of the files written to `out_dir`.
nlohmann::json BuildManifest(const ManifestInputs& inputs,
                             const std::string& out_dir,
                             const DayResult& result);

// Wall-clock per slot; kept out of the manifest so reruns stay identical.
nlohmann::json BuildTiming(const DayResult& result);

const char* ToolVersion();

// Command-line entry point. Exit status 0 on success, 1 on input errors, 2
// on solver failures.
int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace gridshade

#endif  // GRIDSHADE_REPORT_H_
