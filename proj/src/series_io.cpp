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

#include "qmf/series_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qmf/error.hpp"

namespace qmf {
namespace {

using nlohmann::json;

void write_entry_header(std::ostream& out, std::size_t d) {
  for (std::size_t x = 1; x <= d; ++x)
    for (std::size_t y = 1; y <= d; ++y) out << ",re_" << x << '_' << y << ",im_" << x << '_' << y;
}

void write_entries(std::ostream& out, const ComplexMatrix& m) {
  for (const auto& z : m.entries()) out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
}

void write_bloch(std::ostream& out, const std::array<double, 3>& b) {
  out << ',' << format_double(b[0]) << ',' << format_double(b[1]) << ',' << format_double(b[2]);
}

json fit_or_null(const std::optional<LogLogFit>& fit) { return fit ? to_json(*fit) : json(nullptr); }

json rows_to_json(const std::vector<StudyRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"N", r.particles}, {"mean_error", r.mean}, {"stderr", r.std_error}, {"excluded", r.excluded}});
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const int n = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return {buffer, static_cast<std::size_t>(n)};
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  const std::size_t d = series.states.empty() ? 0 : series.states.front().dim();
  out << 't';
  write_entry_header(out, d);
  out << ",trace_re,purity";
  if (d == 2) out << ",bloch_x,bloch_y,bloch_z";
  out << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    const ComplexMatrix& m = series.states[i];
    out << format_double(series.times[i]);
    write_entries(out, m);
    out << ',' << format_double(trace(m).real()) << ',' << format_double(purity(m));
    if (d == 2) write_bloch(out, bloch_vector(m));
    out << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record, bool full_state) {
  const std::size_t d = record.rows.empty() ? 0 : record.rows.front().state.dim();
  out << "k,t,trace_re,purity";
  if (d == 2) out << ",bloch_x,bloch_y,bloch_z";
  if (full_state) write_entry_header(out, d);
  out << '\n';
  for (const auto& row : record.rows) {
    out << row.step << ',' << format_double(row.time) << ',' << format_double(row.trace_re) << ','
        << format_double(row.purity);
    if (row.bloch) write_bloch(out, *row.bloch);
    if (full_state) write_entries(out, row.state);
    out << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "N,mean_error,stderr\n";
  for (const auto& r : report.rows) {
    out << r.particles << ',' << format_double(r.mean) << ',' << format_double(r.std_error) << '\n';
  }
}

void write_coupling_csv(std::ostream& out, const CouplingReport& report) {
  out << "N,mean_distance,particle_sup_distance\n";
  for (const auto& r : report.rows) {
    out << r.particles << ',' << format_double(r.pooled) << ',' << format_double(r.particle_sup) << '\n';
  }
}

void write_nbody_csv(std::ostream& out, const NBodyTable& table) {
  out << "N,t,discrepancy\n";
  for (const auto& r : table.rows) {
    out << r.particles << ',' << format_double(r.time) << ',' << format_double(r.discrepancy) << '\n';
  }
}

void write_long_csv(std::ostream& out, const std::string& study, const ConvergenceReport& report) {
  out << "study,N,metric,value\n";
  for (const auto& r : report.rows) {
    out << study << ',' << r.particles << ",mean_error," << format_double(r.mean) << '\n';
    out << study << ',' << r.particles << ",stderr," << format_double(r.std_error) << '\n';
  }
  for (const auto& r : report.weighted_rows) {
    out << study << ',' << r.particles << ",weighted_mean_error," << format_double(r.mean) << '\n';
  }
}

void write_long_csv(std::ostream& out, const std::string& study, const CouplingReport& report) {
  out << "study,N,metric,value\n";
  for (const auto& r : report.rows) {
    out << study << ',' << r.particles << ",mean_distance," << format_double(r.pooled) << '\n';
    out << study << ',' << r.particles << ",particle_sup_distance," << format_double(r.particle_sup) << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: missing header");
  {
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) table.header.push_back(field);
  }
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ConfigError("csv line " + std::to_string(line_number) + ": bad number '" + field + "'");
      }
      row.push_back(value);
    }
    if (row.size() != table.header.size()) {
      throw ConfigError("csv line " + std::to_string(line_number) + ": expected " +
                        std::to_string(table.header.size()) + " fields");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

json to_json(const LogLogFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
}

json to_json(const ConvergenceReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    json cell = {{"N", c.particles}, {"seed", c.seed}, {"sup_error", c.value}};
    if (c.failure) cell["failure"] = *c.failure;
    cells.push_back(std::move(cell));
  }
  json out = {{"dt", report.dt},
              {"T", report.horizon},
              {"seeds", report.seeds},
              {"rows", rows_to_json(report.rows)},
              {"fit", fit_or_null(report.fit)},
              {"cells", std::move(cells)},
              {"excluded", report.excluded},
              {"valid", report.valid}};
  if (!report.weighted_rows.empty()) {
    out["weighted_rows"] = rows_to_json(report.weighted_rows);
    out["weighted_fit"] = fit_or_null(report.weighted_fit);
  }
  return out;
}

json to_json(const CouplingReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"N", r.particles},
                    {"mean_distance", r.pooled},
                    {"particle_sup_distance", r.particle_sup},
                    {"excluded", r.excluded}});
  }
  return {{"dt", report.dt},
          {"T", report.horizon},
          {"seeds", report.seeds},
          {"rows", std::move(rows)},
          {"fit", fit_or_null(report.fit)},
          {"particle_sup_fit", fit_or_null(report.particle_sup_fit)},
          {"excluded", report.excluded},
          {"valid", report.valid}};
}

json to_json(const NBodyTable& table) {
  json at_t = json::array();
  for (const auto& [n, value] : table.at_horizon) at_t.push_back({{"N", n}, {"discrepancy", value}});
  return {{"at_T", std::move(at_t)}, {"monotone_at_T", table.monotone_at_horizon}};
}

json to_json(const PhysicalityReport& checks) {
  return {{"max_trace_error", checks.max_trace_error},
          {"max_hermiticity", checks.max_hermiticity},
          {"min_eigenvalue", checks.min_eigenvalue},
          {"warnings", checks.warnings}};
}

json to_json(const RunChecks& checks) {
  return {{"max_norm_error", checks.max_norm_error},
          {"max_trace_error", checks.max_trace_error},
          {"max_hermiticity", checks.max_hermiticity},
          {"min_eigenvalue", checks.min_eigenvalue}};
}

}  // namespace qmf
