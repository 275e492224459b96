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

#include "qmf/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qmf/error.hpp"
#include "qmf/kernel.hpp"

namespace qmf {
namespace {

using nlohmann::json;

Complex parse_complex(const json& node, const std::string& name) {
  if (node.is_number()) return {node.get<double>(), 0.0};
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
    throw ConfigError(name + ": expected a [re, im] pair");
  }
  return {node[0].get<double>(), node[1].get<double>()};
}

const json& require(const json& node, const char* key, const std::string& where) {
  if (!node.is_object() || !node.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return node.at(key);
}

template <typename T>
T value_or(const json& node, const char* key, T fallback, const std::string& where) {
  if (!node.is_object() || !node.contains(key)) return fallback;
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

ModelSpec parse_model(const json& model, TrajectoryMode mode) {
  const std::string where = "model";
  const auto d = require(model, "d", where).get<std::size_t>();
  if (d == 0) throw ConfigError("model.d must be positive");

  const ComplexMatrix h = parse_matrix(require(model, "H", where), "model.H");
  if (h.dim() != d) throw ConfigError("model.H must be " + std::to_string(d) + "x" + std::to_string(d));
  HermitianOperator hamiltonian = [&] {
    try {
      return HermitianOperator(h);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("model.H: ") + e.what());
    }
  }();

  const ComplexMatrix l = parse_matrix(require(model, "L", where), "model.L");
  if (l.dim() != d) throw ConfigError("model.L must be " + std::to_string(d) + "x" + std::to_string(d));

  const ComplexMatrix a = parse_matrix(require(model, "kernel", where), "model.kernel");
  if (a.dim() != d * d) throw ConfigError("model.kernel must be d^2 x d^2 = " + std::to_string(d * d));
  InteractionKernel kernel(a);
  const KernelValidation validation = validate_kernel(kernel);
  if (!validation.passed) throw ConfigError("model.kernel: " + validation.summary());

  const json& initial = require(model, "initial", where);
  const bool has_psi = initial.contains("psi0");
  const bool has_rho = initial.contains("rho0");
  if (has_psi == has_rho) throw ConfigError("model.initial: exactly one of psi0 / rho0 must be given");
  InitialState state = has_psi ? InitialState{PureState{parse_vector(initial.at("psi0"), "model.initial.psi0"), true}}
                               : InitialState{parse_matrix(initial.at("rho0"), "model.initial.rho0")};

  ModelSpec spec(std::move(hamiltonian), l, std::move(kernel), std::move(state));
  if (mode != TrajectoryMode::kNormalizedDensity && !spec.has_pure_initial()) {
    throw ConfigError("model.initial: pure-state modes require psi0 or a rank-1 rho0");
  }
  return spec;
}

SchemeConfig parse_scheme(const json& node) {
  const std::string where = "scheme";
  SchemeConfig scheme;
  scheme.mode = parse_mode(value_or<std::string>(node, "mode", std::string(to_string(scheme.mode)), where));
  scheme.variant =
      parse_variant(value_or<std::string>(node, "diffusion_variant", std::string(to_string(scheme.variant)), where));
  scheme.renormalize_each_step = value_or<bool>(node, "renormalize_each_step", true, where);
  scheme.dt = require(node, "dt", where).get<double>();
  scheme.horizon = require(node, "T", where).get<double>();
  scheme.record_stride = value_or<std::size_t>(node, "record_stride", 1, where);
  scheme.validate();
  return scheme;
}

}  // namespace

ComplexMatrix parse_matrix(const json& node, const std::string& name) {
  if (!node.is_array() || node.empty()) throw ConfigError(name + ": expected a nonempty array of rows");
  const std::size_t dim = node.size();
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const json& row = node[i];
    if (!row.is_array() || row.size() != dim) {
      throw ConfigError(name + ": row " + std::to_string(i + 1) + " must have " + std::to_string(dim) + " entries");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      m(i, j) = parse_complex(row[j], name + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  }
  if (!m.is_finite()) throw ConfigError(name + ": non-finite entry");
  return m;
}

ComplexVector parse_vector(const json& node, const std::string& name) {
  if (!node.is_array() || node.empty()) throw ConfigError(name + ": expected a nonempty array");
  ComplexVector v(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) v[i] = parse_complex(node[i], name + "[" + std::to_string(i + 1) + "]");
  return v;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

SimulationConfig parse_config(const json& doc) {
  const int version = require(doc, "schema_version", "config").get<int>();
  if (version != 1) throw ConfigError("unsupported schema_version " + std::to_string(version));

  const SchemeConfig scheme = parse_scheme(require(doc, "scheme", "config"));
  SimulationConfig config{version, parse_model(require(doc, "model", "config"), scheme.mode), scheme, 1, 0, StudySettings{}, OutputSettings{}};

  if (doc.contains("run")) {
    const json& run = doc.at("run");
    config.particles = value_or<std::size_t>(run, "N", 1, "run");
    config.seed = value_or<std::uint64_t>(run, "seed", 0, "run");
    config.study.seeds = value_or<std::vector<std::uint64_t>>(run, "seeds", {}, "run");
    config.study.n_values = value_or<std::vector<std::size_t>>(run, "N_values", {}, "run");
    config.study.nbody_n_values =
        value_or<std::vector<std::size_t>>(run, "nbody_N_values", config.study.nbody_n_values, "run");
  }
  if (config.particles == 0) throw ConfigError("run.N must be at least 1");

  if (doc.contains("output")) {
    const json& output = doc.at("output");
    config.output.directory = value_or<std::string>(output, "directory", "out", "output");
    config.output.full_state = value_or<bool>(output, "full_state", true, "output");
    if (output.contains("formats")) {
      config.output.csv = false;
      config.output.json = false;
      for (const auto& f : output.at("formats")) {
        const auto name = f.get<std::string>();
        if (name == "csv") {
          config.output.csv = true;
        } else if (name == "json") {
          config.output.json = true;
        } else {
          throw ConfigError("output.formats: unknown format '" + name + "'");
        }
      }
    }
  }
  return config;
}

SimulationConfig parse_config_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(line_of_offset(text, e.byte)) + ": parse error: " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

}  // namespace qmf
