// Copyright 2026 The qmf Authors
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

#pragma once

// CSV and JSON emission. Every floating-point value is written with 17
// significant digits so that reading it back reproduces the same double.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmf/experiments.hpp"
#include "qmf/generators.hpp"
#include "qmf/trajectories.hpp"

namespace qmf {

std::string format_double(double value);

/// t, re_x_y / im_x_y row-major, trace_re, purity, bloch_x/y/z (d = 2).
void write_series_csv(std::ostream& out, const TimeSeries& series);
/// k, t, trace_re, purity, bloch_x/y/z (d = 2), then optional entries.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record, bool full_state);

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
void write_coupling_csv(std::ostream& out, const CouplingReport& report);
void write_nbody_csv(std::ostream& out, const NBodyTable& table);
/// Long format (study, N, metric, value) for plotting tools.
void write_long_csv(std::ostream& out, const std::string& study, const ConvergenceReport& report);
void write_long_csv(std::ostream& out, const std::string& study, const CouplingReport& report);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Numeric CSV with one header line; throws ConfigError on malformed input.
CsvTable read_csv(std::istream& in);

nlohmann::json to_json(const LogLogFit& fit);
nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const CouplingReport& report);
nlohmann::json to_json(const NBodyTable& table);
nlohmann::json to_json(const PhysicalityReport& checks);
nlohmann::json to_json(const RunChecks& checks);

}  // namespace qmf
