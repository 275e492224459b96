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

// Run configuration: JSON document with schema_version 1. Matrices are nested
// arrays of [re, im] pairs, row-major; vectors are arrays of [re, im].

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmf/generators.hpp"
#include "qmf/trajectories.hpp"

namespace qmf {

struct StudySettings {
  std::vector<std::size_t> n_values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> nbody_n_values{1, 2, 3, 4};
};

struct OutputSettings {
  std::filesystem::path directory = "out";
  bool csv = true;
  bool json = true;
  bool full_state = true;
};

struct SimulationConfig {
  int schema_version = 1;
  ModelSpec model;
  SchemeConfig scheme;
  std::size_t particles = 1;
  std::uint64_t seed = 0;
  StudySettings study;
  OutputSettings output;
};

/// Throws ConfigError with the line number on parse errors and the failing
/// check on validation errors.
SimulationConfig load_config(const std::filesystem::path& path);
SimulationConfig parse_config(const nlohmann::json& doc);
/// Parses text; `source` is used in error messages.
SimulationConfig parse_config_text(const std::string& text, const std::string& source = "<config>");

ComplexMatrix parse_matrix(const nlohmann::json& node, const std::string& name);
ComplexVector parse_vector(const nlohmann::json& node, const std::string& name);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json vector_to_json(const ComplexVector& v);

}  // namespace qmf
