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

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qmf/config.hpp"
#include "qmf/error.hpp"
#include "qmf/series_io.hpp"
#include "support.hpp"

using namespace qmf;
using nlohmann::json;

namespace {

json example_doc() {
  std::ifstream in(test::source_path("configs/qubit_example.json"));
  return json::parse(in);
}

std::string error_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("shipped configurations load") {
  const auto config = test::qubit_example();
  CHECK(config.model.d() == 2);
  CHECK(config.scheme.mode == TrajectoryMode::kNormalizedDensity);
  CHECK(config.scheme.dt == 1e-3);
  CHECK(config.study.n_values == std::vector<std::size_t>{8, 16, 32, 64, 128, 256});
  CHECK(config.study.seeds.size() == 16);
  const Complex diag[] = {1.0, 0.0, 0.0, 1.0};
  CHECK(config.model.kernel().matrix() == ComplexMatrix::diagonal(diag));
  CHECK(validate_kernel(config.model.kernel()).passed);
  CHECK(config.model.channel() == pauli::lowering());
  for (const char* name : {"configs/qubit_free.json", "configs/qubit_unnormalized.json"}) {
    CHECK_NOTHROW(load_config(test::source_path(name)));
  }
}

TEST_CASE("configuration errors") {
  json doc = example_doc();
  doc["model"]["H"][0][1] = json::array({4, 1});
  CHECK(error_of(doc).find("Hermitian") != std::string::npos);

  doc = example_doc();
  doc["model"]["initial"]["rho0"] = json::array({json::array({json::array({0, 0}), json::array({0, 0})}),
                                                 json::array({json::array({0, 0}), json::array({1, 0})})});
  CHECK(error_of(doc).find("exactly one") != std::string::npos);

  doc = example_doc();
  doc["model"]["initial"] = {{"rho0", json::array({json::array({json::array({0.5, 0}), json::array({0, 0})}),
                                                   json::array({json::array({0, 0}), json::array({0.5, 0})})})}};
  doc["scheme"]["mode"] = "normalized-pure";
  CHECK(error_of(doc).find("pure") != std::string::npos);
  doc["scheme"]["mode"] = "normalized-density";
  CHECK(error_of(doc).empty());

  doc = example_doc();
  doc["model"]["kernel"][0][1] = json::array({1, 0});
  CHECK(error_of(doc).find("kernel") != std::string::npos);

  doc = example_doc();
  doc["schema_version"] = 2;
  CHECK_FALSE(error_of(doc).empty());

  doc = example_doc();
  doc["scheme"]["dt"] = -1.0;
  CHECK(error_of(doc).find("dt") != std::string::npos);

  try {
    parse_config_text("{\n  \"schema_version\": 1,\n  oops\n}", "broken.json");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("broken.json:3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("matrix literals round-trip") {
  const ComplexMatrix m{{Complex(1, 2), Complex(3, -4)}, {Complex(0.1, 0), Complex(-7, 0.25)}};
  CHECK(parse_matrix(matrix_to_json(m), "m") == m);
  const ComplexVector v{Complex(0.5, -0.5), Complex(1e-300, 3)};
  CHECK(parse_vector(vector_to_json(v), "v") == v);
  CHECK_THROWS_AS(parse_matrix(json::parse("[[[1,0],[0,0]],[[0,0]]]"), "m"), ConfigError);
}

TEST_CASE("numbers print with 17 significant digits") {
  for (double x : {0.1, 1.0 / 3.0, 2.0 / 3.0 * 1e-300, -123456.789, 6.02214076e23}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("series CSV round-trips") {
  const auto config = test::qubit_example();
  const auto ref = solve_meanfield_reference(config.model, 0.1, 1e-3, 7);
  std::stringstream buffer;
  write_series_csv(buffer, ref.series);
  const CsvTable table = read_csv(buffer);
  REQUIRE(table.rows.size() == ref.series.size());
  CHECK(table.header.front() == "t");
  CHECK(table.header[1] == "re_1_1");
  CHECK(table.header.back() == "bloch_z");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const ComplexMatrix& m = ref.series.states[i];
    CHECK(row[0] == ref.series.times[i]);
    for (std::size_t e = 0; e < 4; ++e) {
      CHECK(row[1 + 2 * e] == m.entries()[e].real());
      CHECK(row[2 + 2 * e] == m.entries()[e].imag());
    }
    CHECK(row[11] == bloch_vector(m)[0]);
  }
}

TEST_CASE("trajectory CSV round-trips") {
  const auto config = test::qubit_example();
  auto scheme = config.scheme;
  scheme.horizon = 0.05;
  const auto record = simulate(config.model, scheme, 16, 3);
  std::stringstream buffer;
  write_trajectory_csv(buffer, record, true);
  const CsvTable table = read_csv(buffer);
  REQUIRE(table.rows.size() == record.rows.size());
  CHECK(table.header[0] == "k");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i][0] == static_cast<double>(record.rows[i].step));
    CHECK(table.rows[i][3] == record.rows[i].purity);
    CHECK(table.rows[i][7] == record.rows[i].state(0, 0).real());
    CHECK(table.rows[i][10] == record.rows[i].state(0, 1).imag());
  }
}

TEST_CASE("CSV reader rejects malformed input") {
  std::stringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), ConfigError);
  std::stringstream text("a\nxyz\n");
  CHECK_THROWS_AS(read_csv(text), ConfigError);
  std::stringstream empty;
  CHECK_THROWS_AS(read_csv(empty), ConfigError);
}

TEST_CASE("report JSON carries the fit and rows") {
  ConvergenceReport report;
  report.rows.push_back({8, 0.1, 0.01, 0});
  report.fit = LogLogFit{-1.0, 0.5, 0.99};
  const json doc = to_json(report);
  CHECK(doc["fit"]["slope"] == -1.0);
  CHECK(doc["rows"][0]["N"] == 8);
  CHECK(doc["valid"] == true);
  std::stringstream csv;
  write_convergence_csv(csv, report);
  CHECK(csv.str() == "N,mean_error,stderr\n8,0.10000000000000001,0.01\n");
}
