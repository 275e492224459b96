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

// qmf: mean-field quantum trajectory simulator.
//
//   qmf <reference|simulate|converge|chaos|nbody|validate> --config <path> [overrides]
//
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 study invalid.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmf/config.hpp"
#include "qmf/error.hpp"
#include "qmf/experiments.hpp"
#include "qmf/kernel.hpp"
#include "qmf/parallel.hpp"
#include "qmf/series_io.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitStudy = 4;

struct Overrides {
  std::string config;
  std::optional<std::size_t> particles;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> mode;
  std::optional<std::string> variant;
  std::optional<std::size_t> stride;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->required();
  cmd->add_option("--N", o.particles, "particle count");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--T", o.horizon, "horizon");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads (results do not depend on it)");
  cmd->add_option("--mode", o.mode, "normalized-pure | unnormalized-pure | normalized-density");
  cmd->add_option("--variant", o.variant, "algorithm1 | halved-expectation");
  cmd->add_option("--stride", o.stride, "record every k-th step");
}

qmf::SimulationConfig load_with_overrides(const Overrides& o) {
  qmf::SimulationConfig config = qmf::load_config(o.config);
  if (o.particles) {
    if (*o.particles == 0) throw qmf::ConfigError("--N must be >= 1");
    config.particles = *o.particles;
  }
  if (o.seed) config.seed = *o.seed;
  if (o.dt) config.scheme.dt = *o.dt;
  if (o.horizon) config.scheme.horizon = *o.horizon;
  if (o.out) config.output.directory = *o.out;
  if (o.mode) config.scheme.mode = qmf::parse_mode(*o.mode);
  if (o.variant) config.scheme.variant = qmf::parse_variant(*o.variant);
  if (o.stride) config.scheme.record_stride = *o.stride;
  config.scheme.validate();
  if (config.scheme.mode != qmf::TrajectoryMode::kNormalizedDensity && !config.model.has_pure_initial()) {
    throw qmf::ConfigError("pure-state modes require a pure initial state");
  }
  if (o.threads) {
    if (*o.threads < 1) throw qmf::ConfigError("--threads must be >= 1");
    qmf::set_thread_count(*o.threads);
  }
  return config;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buffer[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

json metadata(const std::string& command, const qmf::SimulationConfig& config, double seconds) {
  return {{"command", command},
          {"schema_version", config.schema_version},
          {"d", config.model.d()},
          {"mode", std::string(qmf::to_string(config.scheme.mode))},
          {"diffusion_variant", std::string(qmf::to_string(config.scheme.variant))},
          {"renormalize_each_step", config.scheme.renormalize_each_step},
          {"dt", config.scheme.dt},
          {"T", config.scheme.horizon},
          {"record_stride", config.scheme.record_stride},
          {"N", config.particles},
          {"seed", config.seed},
          {"threads", qmf::thread_count()},
          {"wall_clock_seconds", seconds},
          {"timestamp", utc_timestamp()}};
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw qmf::ConfigError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_json(const fs::path& path, const json& doc) { open_output(path) << doc.dump(2) << '\n'; }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_validate(const qmf::SimulationConfig& config) {
  const auto report = qmf::validate_kernel(config.model.kernel());
  std::cout << "config ok: d=" << config.model.d() << ", mode=" << qmf::to_string(config.scheme.mode) << '\n'
            << report.summary() << '\n';
  return kExitOk;
}

int cmd_reference(const qmf::SimulationConfig& config) {
  Timer timer;
  const auto& s = config.scheme;
  const auto solution = qmf::solve_meanfield_reference(config.model, s.horizon, s.dt, s.record_stride);
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  if (config.output.csv) {
    auto out = open_output(dir / "reference.csv");
    qmf::write_series_csv(out, solution.series);
  }
  json meta = metadata("reference", config, timer.seconds());
  meta["checks"] = qmf::to_json(solution.checks);
  write_json(dir / "reference_meta.json", meta);
  for (const auto& w : solution.checks.warnings) std::cerr << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_simulate(const qmf::SimulationConfig& config) {
  Timer timer;
  const auto record = qmf::simulate(config.model, config.scheme, config.particles, config.seed);
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  if (config.output.csv) {
    auto out = open_output(dir / "trajectory.csv");
    qmf::write_trajectory_csv(out, record, config.output.full_state);
  }
  json meta = metadata("simulate", config, timer.seconds());
  meta["checks"] = qmf::to_json(record.checks);
  if (record.failure) meta["failure"] = {{"step", record.failure->step}, {"message", record.failure->message}};
  write_json(dir / "trajectory_meta.json", meta);
  if (record.failure) {
    std::cerr << "run aborted at step " << record.failure->step << ": " << record.failure->message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

void require_study(const qmf::SimulationConfig& config) {
  if (config.study.n_values.empty() || config.study.seeds.empty()) {
    throw qmf::ConfigError("studies need run.N_values and run.seeds");
  }
}

int cmd_converge(const qmf::SimulationConfig& config) {
  require_study(config);
  Timer timer;
  const auto report = qmf::convergence_study(config.model, config.scheme, config.study.n_values, config.study.seeds);
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  if (config.output.csv) {
    auto table = open_output(dir / "convergence.csv");
    qmf::write_convergence_csv(table, report);
    auto long_form = open_output(dir / "convergence_long.csv");
    qmf::write_long_csv(long_form, "convergence", report);
  }
  if (config.output.json) {
    json doc = qmf::to_json(report);
    doc["meta"] = metadata("converge", config, timer.seconds());
    write_json(dir / "convergence.json", doc);
  }
  if (report.fit) std::cout << "slope " << report.fit->slope << ", r^2 " << report.fit->r_squared << '\n';
  return report.valid ? kExitOk : kExitStudy;
}

int cmd_chaos(const qmf::SimulationConfig& config) {
  require_study(config);
  Timer timer;
  const auto report = qmf::coupled_chaos_study(config.model, config.scheme, config.study.n_values, config.study.seeds);
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  if (config.output.csv) {
    auto table = open_output(dir / "chaos.csv");
    qmf::write_coupling_csv(table, report);
    auto long_form = open_output(dir / "chaos_long.csv");
    qmf::write_long_csv(long_form, "chaos", report);
  }
  if (config.output.json) {
    json doc = qmf::to_json(report);
    doc["meta"] = metadata("chaos", config, timer.seconds());
    write_json(dir / "chaos.json", doc);
  }
  if (report.fit) std::cout << "slope " << report.fit->slope << ", r^2 " << report.fit->r_squared << '\n';
  return report.valid ? kExitOk : kExitStudy;
}

int cmd_nbody(const qmf::SimulationConfig& config) {
  Timer timer;
  const auto& s = config.scheme;
  const auto table = qmf::chaos_vs_nbody(config.model, config.study.nbody_n_values, s.horizon, s.dt, s.record_stride);
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  if (config.output.csv) {
    auto out = open_output(dir / "nbody.csv");
    qmf::write_nbody_csv(out, table);
  }
  if (config.output.json) {
    json doc = qmf::to_json(table);
    doc["meta"] = metadata("nbody", config, timer.seconds());
    write_json(dir / "nbody.json", doc);
  }
  for (const auto& [n, value] : table.at_horizon) std::cout << "N=" << n << "  " << value << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field quantum trajectory simulator"};
  app.require_subcommand(1);
  Overrides overrides;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const qmf::SimulationConfig&);
  };
  const Entry entries[] = {
      {"reference", "integrate the mean-field equation", cmd_reference},
      {"simulate", "run the interacting particle system", cmd_simulate},
      {"converge", "Monte-Carlo error versus N", cmd_converge},
      {"chaos", "synchronous-coupling distance versus N", cmd_chaos},
      {"nbody", "exact N-body marginal versus mean-field", cmd_nbody},
      {"validate", "load and validate a configuration", cmd_validate},
  };
  for (const auto& e : entries) add_common_options(app.add_subcommand(e.name, e.help), overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (const auto env = qmf::thread_count_from_env()) qmf::set_thread_count(*env);
  try {
    const auto config = load_with_overrides(overrides);
    for (const auto& e : entries) {
      if (app.got_subcommand(e.name)) return e.run(config);
    }
  } catch (const qmf::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
