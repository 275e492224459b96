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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qmf_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string command = env + " " + QMF_CLI_PATH + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string example() { return qmf::test::source_path("configs/qubit_example.json"); }

// Euler blows up along (1, 0) while the reference solution stays frozen there.
fs::path write_unstable_config(const fs::path& dir) {
  std::ifstream in(example());
  nlohmann::json doc = nlohmann::json::parse(in);
  const double ell = std::sqrt(6.0);
  doc["model"]["H"] = nlohmann::json::parse("[[[0,0],[0,0]],[[0,0],[0,0]]]");
  doc["model"]["L"] = {{{ell, 0}, {0, 0}}, {{0, 0}, {-ell, 0}}};
  doc["model"]["initial"] = {{"psi0", {{1, 0}, {0, 0}}}};
  doc["scheme"]["mode"] = "unnormalized-pure";
  doc["scheme"]["dt"] = 1.0;
  doc["scheme"]["T"] = 1000.0;
  doc["scheme"]["record_stride"] = 100;
  doc["run"]["N_values"] = {1, 2, 4, 16};
  doc["run"]["seeds"] = {1, 2, 3, 4, 5, 6, 7, 8};
  const fs::path path = dir / "unstable.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

}  // namespace

TEST_CASE("validate and reference") {
  const fs::path dir = scratch("reference");
  CHECK(run("validate --config " + example()) == 0);
  CHECK(run("reference --config " + example() + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "reference.csv"));
  const auto meta = nlohmann::json::parse(slurp(dir / "reference_meta.json"));
  CHECK(meta["checks"]["max_trace_error"].get<double>() <= 1e-8);
  CHECK(meta["dt"] == 1e-3);
}

TEST_CASE("configuration errors exit with 2") {
  const fs::path dir = scratch("errors");
  CHECK(run("validate --config /nonexistent.json") == 2);
  CHECK(run("simulate --config " + example() + " --dt -1") == 2);
  CHECK(run("simulate --config " + example() + " --mode sideways") == 2);
  CHECK(run("bogus --config " + example()) == 2);
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(run("validate --config " + (dir / "bad.json").string()) == 2);
}

TEST_CASE("numerical failures exit with 3 and invalid studies with 4") {
  const fs::path dir = scratch("unstable");
  const fs::path config = write_unstable_config(dir);
  CHECK(run("simulate --config " + config.string() + " --N 4 --out " + dir.string()) == 3);
  const auto meta = nlohmann::json::parse(slurp(dir / "trajectory_meta.json"));
  CHECK(meta.contains("failure"));
  CHECK(run("converge --config " + config.string() + " --out " + dir.string()) == 4);
  CHECK(nlohmann::json::parse(slurp(dir / "convergence.json"))["valid"] == false);
}

TEST_CASE("overrides and thread count leave the output unchanged") {
  const fs::path a = scratch("threads_a");
  const fs::path b = scratch("threads_b");
  const fs::path c = scratch("threads_c");
  const std::string common = "simulate --config " + example() + " --N 33 --seed 9 --T 0.2 --stride 1";
  REQUIRE(run(common + " --threads 1 --out " + a.string()) == 0);
  REQUIRE(run(common + " --threads 3 --out " + b.string()) == 0);
  REQUIRE(run(common + " --out " + c.string(), "QMF_THREADS=2") == 0);
  const std::string first = slurp(a / "trajectory.csv");
  CHECK(first == slurp(b / "trajectory.csv"));
  CHECK(first == slurp(c / "trajectory.csv"));
  const auto meta = nlohmann::json::parse(slurp(a / "trajectory_meta.json"));
  CHECK(meta["N"] == 33);
  CHECK(meta["seed"] == 9);
  CHECK(meta["T"] == 0.2);
  std::istringstream lines(first);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 202);
}

TEST_CASE("free-model studies from the command line") {
  const fs::path dir = scratch("free");
  const std::string config = qmf::test::source_path("configs/qubit_free.json");
  REQUIRE(run("chaos --config " + config + " --T 0.1 --out " + dir.string()) == 0);
  const auto chaos = nlohmann::json::parse(slurp(dir / "chaos.json"));
  for (const auto& row : chaos["rows"]) {
    CHECK(row["mean_distance"] == 0.0);
    CHECK(row["particle_sup_distance"] == 0.0);
  }
  REQUIRE(run("nbody --config " + config + " --out " + dir.string()) == 0);
  const auto nbody = nlohmann::json::parse(slurp(dir / "nbody.json"));
  for (const auto& row : nbody["at_T"]) CHECK(row["discrepancy"].get<double>() <= 1e-8);
  CHECK(fs::exists(dir / "nbody.csv"));
  CHECK(fs::exists(dir / "chaos_long.csv"));
}
